#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hetnet/geometry.hpp"
#include "hetnet/network_config.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/statistics.hpp"

namespace hetnet::mc {

/// How UL interferers are generated.
///  - Accurate: a device PPP of lambda_d is drawn, and each BS other than the
///    serving one schedules one uniformly chosen device from its cell.
///  - Approximate: an independent PPP of lambda_M + lambda_F outside the
///    serving-link disk around the receiving BS.
enum class SimMode : std::uint8_t { Accurate, Approximate };

/// What a run measures. Association draws BSs only; Loads adds devices and
/// per-BS loads; Coverage adds SINR; Full does both, which throughputs and
/// gains need.
enum class Scope : std::uint8_t { Association, Loads, Coverage, Full };

/// Which BS receives the typical device's UL: its DLAP (coupled) or its ULAP (decoupled).
enum class UplinkRule : std::uint8_t { Coupled, Decoupled };

[[nodiscard]] std::string to_string(SimMode mode);
[[nodiscard]] SimMode parse_mode(const std::string& text);

struct Options {
  std::uint64_t samples = 100000;
  RngSeed seed{1};
  SimMode mode = SimMode::Approximate;
  Scope scope = Scope::Full;
  /// Interference window radius = window_factor / sqrt(pi * lambda_min); must be >= 5.
  double window_factor = 20.0;
  /// Worker threads; 0 = HETNET_WORKERS environment variable, else hardware concurrency.
  unsigned workers = 0;
};

inline constexpr std::uint64_t kMinSamples = 100;
/// Window factor used for association-only draws and the approximate-mode load window.
inline constexpr double kAssociationWindowFactor = 5.0;

/// Disk radii (meters) a run draws on.
struct WindowPlan {
  double bs_radius = 0.0;
  double device_radius = 0.0;  ///< 0 = no devices drawn
  double interferer_radius = 0.0;
};

[[nodiscard]] WindowPlan plan_windows(const NetworkConfig& cfg, const Options& opts);

/// One realization of the three point processes. The typical device sits at
/// the origin and is not part of `devices`. Fading marks are not stored:
/// they are drawn on demand from `stream`.
struct Deployment {
  PointSet mbs;
  PointSet fbs;
  PointSet devices;
  RngSeed stream;
  unsigned redraws = 0;  ///< empty-tier realizations rejected before this one

  [[nodiscard]] const PointSet& tier(Tier t) const { return t == Tier::Macro ? mbs : fbs; }
};

/// Deterministic in (seed, index). Realizations with an empty tier of positive
/// density are rejected and redrawn; throws NoCandidateError after 1000 tries.
[[nodiscard]] Deployment draw_deployment(const NetworkConfig& cfg, RngSeed seed, std::uint64_t index,
                                         const WindowPlan& plan);

struct BsRef {
  Tier tier = Tier::Macro;
  std::size_t index = 0;
  friend bool operator==(const BsRef&, const BsRef&) = default;
};

struct AccessPoint {
  BsRef bs;
  double distance = 0.0;
};

struct AssociationOutcome {
  AccessPoint dlap;
  AccessPoint ulap;
  AssociationCase association_case = AssociationCase::Case1;

  [[nodiscard]] const AccessPoint& serving(UplinkRule rule) const {
    return rule == UplinkRule::Coupled ? dlap : ulap;
  }
};

/// DL/UL association of a device from its nearest BS of each tier
/// (`femto` is empty when the femto tier has no BS).
[[nodiscard]] AssociationOutcome associate_point(const NetworkConfig& cfg, const std::optional<NearestPoint>& macro,
                                                 const std::optional<NearestPoint>& femto);

/// Associates the typical device at the origin. Throws NoCandidateError when a
/// tier with positive density has no BS in the window.
[[nodiscard]] AssociationOutcome associate(const Deployment& dep, const NetworkConfig& cfg);

/// Unit-mean exponential fading marks, one per link, drawn in sequence.
class FadingStream {
 public:
  explicit FadingStream(RngSeed seed, double scale = 1.0);
  /// Every draw returns `h` (for deterministic checks).
  [[nodiscard]] static FadingStream constant(double h);

  double next();

 private:
  FadingStream() = default;
  Engine engine_;
  std::exponential_distribution<double> exp_{1.0};
  double scale_ = 1.0;
  bool constant_ = false;
};

/// Path gain ||x||^-alpha from a squared distance.
[[nodiscard]] double path_gain(double squared_distance, double alpha);

/// Downlink SINR at the origin: serving BS over all other BSs of both tiers plus noise.
[[nodiscard]] double dl_sinr(const Deployment& dep, const AssociationOutcome& out, const NetworkConfig& cfg,
                             FadingStream& fading);

/// Cell membership of every device under both association rules.
struct CellAssignment {
  /// Device indices grouped by BS: members[tier][bs] lists devices in ascending order.
  std::array<std::vector<std::vector<std::size_t>>, 2> members;

  [[nodiscard]] const std::vector<std::size_t>& cell(BsRef bs) const {
    return members[static_cast<std::size_t>(bs.tier)][bs.index];
  }
};

struct CellAssignments {
  CellAssignment downlink;
  CellAssignment uplink;

  [[nodiscard]] const CellAssignment& for_rule(UplinkRule rule) const {
    return rule == UplinkRule::Coupled ? downlink : uplink;
  }
};

[[nodiscard]] CellAssignments assign_cells(const Deployment& dep, const NetworkConfig& cfg);

/// Independent PPP of lambda_M + lambda_F on the disk of `radius` around the
/// receiving BS (placed at the origin), with points closer than
/// `serving_distance` removed.
[[nodiscard]] PointSet approximate_interferers(const NetworkConfig& cfg, double serving_distance, double radius,
                                               RngSeed seed);

/// One scheduled device per non-empty cell other than `serving`, in absolute coordinates.
[[nodiscard]] PointSet accurate_interferers(const Deployment& dep, const CellAssignment& cells, BsRef serving,
                                            RngSeed seed);

struct UplinkOptions {
  SimMode mode = SimMode::Approximate;
  UplinkRule rule = UplinkRule::Decoupled;
  double interferer_radius = 0.0;
};

/// Uplink SINR of the typical device at its serving BS. The realization is
/// translated so the serving BS sits at the origin. `cells` is required in
/// Accurate mode.
[[nodiscard]] double ul_sinr(const Deployment& dep, const AssociationOutcome& out, const NetworkConfig& cfg,
                             const UplinkOptions& opts, FadingStream& fading, const CellAssignments* cells = nullptr);

/// Per-BS device counts, summed over BSs of each tier inside `inner_radius`.
struct LoadTally {
  std::array<double, 2> devices_dl{};  ///< indexed by Tier
  std::array<double, 2> devices_ul{};
  std::array<double, 2> stations{};
};

[[nodiscard]] LoadTally tally_loads(const Deployment& dep, const CellAssignments& cells, double inner_radius);

/// Same tally without materializing cell member lists.
[[nodiscard]] LoadTally tally_loads(const Deployment& dep, const NetworkConfig& cfg, double inner_radius);

using NamedEstimate = std::pair<std::string, McEstimate>;

/// Monte Carlo counterpart of analytic::Report. Scalars a run's scope does
/// not cover are NaN.
struct Report {
  double target_sinr = 0.0;
  Options options;
  WindowPlan windows;
  std::uint64_t realizations = 0;
  std::uint64_t redraws = 0;
  std::array<std::uint64_t, 4> case_counts{};
  /// Realizations whose ULAP was farther than the DLAP (must stay 0).
  std::uint64_t distance_order_violations = 0;
  std::vector<NamedEstimate> scalars;

  [[nodiscard]] const McEstimate& at(const std::string& name) const;
};

/// Names of every scalar a Report carries, in report order.
[[nodiscard]] std::vector<std::string> scalar_names();

/// Runs `opts.samples` independent realizations. Throws ParameterError for
/// samples < kMinSamples or window_factor < 5.
[[nodiscard]] Report estimate(const NetworkConfig& cfg, double gamma, const Options& opts);

/// Worker count resolved from the HETNET_WORKERS environment variable or the hardware.
[[nodiscard]] unsigned default_workers();

}  // namespace hetnet::mc
