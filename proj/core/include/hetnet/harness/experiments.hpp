#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/harness/config_io.hpp"
#include "hetnet/harness/results.hpp"
#include "hetnet/montecarlo.hpp"

namespace hetnet::harness {

using NamedValue = std::pair<std::string, double>;

/// Association-level scalars (case probabilities, A_{v,n}, loads).
[[nodiscard]] std::vector<NamedValue> association_scalars(const NetworkConfig& cfg);

/// Every analytic scalar under the names the Monte Carlo report uses.
[[nodiscard]] std::vector<NamedValue> analytic_scalars(const analytic::Report& report);

[[nodiscard]] ResultTable run_assoc(const RunConfig& cfg);
[[nodiscard]] ResultTable run_throughput(const RunConfig& cfg);
[[nodiscard]] ResultTable run_sweep(const SweepSpec& spec);

struct ValidationCheck {
  std::string name;
  double analytic = 0.0;
  McEstimate mc;
  double z = 0.0;
  bool pass = false;
};

struct ValidationResult {
  std::vector<ValidationCheck> checks;
  double analytic_probability_sum = 0.0;
  double mc_probability_sum = 0.0;
  bool probability_sums_ok = false;
  bool pass = false;

  [[nodiscard]] ResultTable table() const;
  [[nodiscard]] std::vector<std::string> offenders() const;
};

inline constexpr std::uint64_t kMinValidationSamples = 1000;
inline constexpr double kZThreshold = 3.0;

/// Compares an analytic report with a Monte Carlo report scalar by scalar.
[[nodiscard]] ValidationResult compare(const std::vector<NamedValue>& analytic, const mc::Report& mc);

struct ValidateOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  mc::SimMode mode = mc::SimMode::Approximate;
  double window_factor = 20.0;
  /// Test hook: scale this analytic scalar by 1.1 before comparing.
  std::optional<std::string> corrupt_scalar;
};

/// Throws ConfigError when samples < kMinValidationSamples.
[[nodiscard]] ValidationResult run_validate(const RunConfig& cfg, const ValidateOptions& opts);

}  // namespace hetnet::harness
