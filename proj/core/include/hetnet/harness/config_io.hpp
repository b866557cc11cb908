#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/montecarlo.hpp"
#include "hetnet/network_config.hpp"

namespace hetnet::harness {

/// Invalid or incomplete configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct McSettings {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  mc::SimMode mode = mc::SimMode::Approximate;
  double window_factor = 20.0;

  [[nodiscard]] mc::Options options(mc::Scope scope) const;
};

/// A resolved run: network in SI units plus the target SINR.
struct RunConfig {
  NetworkConfig network = default_network();
  double target_sinr_db = 2.0;
  std::optional<McSettings> monte_carlo;
};

enum class SweepVariable { FemtoDensityRatio, TargetSinrDb };

[[nodiscard]] std::string_view to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::FemtoDensityRatio;
  std::vector<double> grid;
  RunConfig base;

  /// The run at grid point `i`, validated.
  [[nodiscard]] RunConfig point(std::size_t i) const;
};

/// Parses a run config document. Required keys (units in the names):
/// density_mbs_per_km2, density_fbs_per_km2, density_devices_per_km2,
/// power_mbs_dbm, power_fbs_dbm, power_device_dbm, path_loss_exponent and
/// one of noise_power_w / noise_power_dbm. Optional: target_sinr_db and a
/// monte_carlo object {samples, seed, mode, window_factor}.
[[nodiscard]] RunConfig parse_run_config(std::string_view text);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

/// Parses {"base": <run config>, "variable": ..., "grid": [..] | {start, stop, count, spacing}}.
[[nodiscard]] SweepSpec parse_sweep(std::string_view text);
[[nodiscard]] SweepSpec load_sweep(const std::filesystem::path& path);

/// The run config in the input schema (dBm, per km^2) as a compact JSON string.
[[nodiscard]] std::string describe(const RunConfig& cfg);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

}  // namespace hetnet::harness
