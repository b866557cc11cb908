#include "hetnet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/spatial_index.hpp"

namespace hetnet::mc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr unsigned kMaxRedraws = 1000;
constexpr std::uint64_t kChunk = 256;

std::size_t tier_slot(Tier t) { return static_cast<std::size_t>(t); }

// Layout of the per-realization sample vector.
enum Slot : std::size_t {
  kCase1, kCase2, kCase3, kCase4,
  kCovDlM, kCovDlF,
  kCovUlcM, kCovUlcF,
  kCovUldM, kCovUldF,
  kCovUlcCase1, kCovUlcCase2, kCovUlcCase3, kCovUlcCase4,
  kCovUldCase1, kCovUldCase2, kCovUldCase3, kCovUldCase4,
  kLoadMd, kLoadFd, kLoadMu, kLoadFu,
  kInnerM, kInnerF,
  kDim
};

std::size_t case_slot(AssociationCase c) { return kCase1 + static_cast<std::size_t>(c) - 1; }

struct ChunkResult {
  MomentAccumulator moments{kDim};
  std::uint64_t redraws = 0;
  std::array<std::uint64_t, 4> cases{};
  std::uint64_t order_violations = 0;
};

void simulate(const NetworkConfig& cfg, double gamma, const Options& opts, const WindowPlan& plan,
              std::uint64_t index, ChunkResult& result, std::array<double, kDim>& y) {
  y.fill(0.0);
  const Deployment dep = draw_deployment(cfg, opts.seed, index, plan);
  result.redraws += dep.redraws;
  const AssociationOutcome out = associate(dep, cfg);
  y[case_slot(out.association_case)] = 1.0;
  ++result.cases[static_cast<std::size_t>(out.association_case) - 1];
  if (out.ulap.distance > out.dlap.distance) {
    ++result.order_violations;
  }
  const bool wants_sinr = opts.scope == Scope::Coverage || opts.scope == Scope::Full;
  const bool wants_loads = opts.scope == Scope::Loads || opts.scope == Scope::Full;
  std::optional<CellAssignments> cells;
  if (wants_sinr && opts.mode == SimMode::Accurate) {
    cells = assign_cells(dep, cfg);
  }
  if (wants_loads) {
    const double inner = 0.5 * plan.device_radius;
    const LoadTally loads = cells ? tally_loads(dep, *cells, inner) : tally_loads(dep, cfg, inner);
    y[kLoadMd] = loads.devices_dl[0];
    y[kLoadFd] = loads.devices_dl[1];
    y[kLoadMu] = loads.devices_ul[0];
    y[kLoadFu] = loads.devices_ul[1];
    y[kInnerM] = loads.stations[0];
    y[kInnerF] = loads.stations[1];
  }
  if (!wants_sinr) {
    result.moments.add(y);
    return;
  }

  FadingStream dl_fading(dep.stream.derive(stream::kFadingDownlink));
  const bool dl_covered = dl_sinr(dep, out, cfg, dl_fading) > gamma;
  y[out.dlap.bs.tier == Tier::Macro ? kCovDlM : kCovDlF] = dl_covered ? 1.0 : 0.0;

  const std::size_t case_offset = static_cast<std::size_t>(out.association_case) - 1;
  for (UplinkRule rule : {UplinkRule::Coupled, UplinkRule::Decoupled}) {
    const bool coupled = rule == UplinkRule::Coupled;
    FadingStream fading(dep.stream.derive(coupled ? stream::kFadingUplinkCoupled : stream::kFadingUplinkDecoupled));
    const UplinkOptions ul{opts.mode, rule, plan.interferer_radius};
    const double covered = ul_sinr(dep, out, cfg, ul, fading, cells ? &*cells : nullptr) > gamma ? 1.0 : 0.0;
    const bool macro = out.serving(rule).bs.tier == Tier::Macro;
    if (coupled) {
      y[macro ? kCovUlcM : kCovUlcF] = covered;
      y[kCovUlcCase1 + case_offset] = covered;
    } else {
      y[macro ? kCovUldM : kCovUldF] = covered;
      y[kCovUldCase1 + case_offset] = covered;
    }
  }
  result.moments.add(y);
}

double ratio(double num, double den) { return den > 0.0 ? num / den : kNaN; }

// Per-tier rates rebuilt from sample means, mirroring the analytic conventions.
analytic::LinkThroughput link_from_means(std::span<const double> m, double gamma, std::size_t cov_m,
                                         std::size_t cov_f, bool uplink_rule) {
  const double a_m = uplink_rule ? m[kCase1] + m[kCase3] : m[kCase1] + m[kCase2];
  const double a_f = uplink_rule ? m[kCase2] + m[kCase4] : m[kCase3] + m[kCase4];
  const double n_m = ratio(uplink_rule ? m[kLoadMu] : m[kLoadMd], m[kInnerM]);
  const double n_f = ratio(uplink_rule ? m[kLoadFu] : m[kLoadFd], m[kInnerF]);
  const double bits = std::log2(1.0 + gamma);
  auto make = [&](double a, double load, double covered) {
    analytic::TierRate r;
    r.association = a;
    r.load = load;
    r.coverage = ratio(covered, a);
    r.rate = a > 0.0 ? bits * r.coverage / load : 0.0;
    return r;
  };
  analytic::LinkThroughput link;
  link.macro = make(a_m, n_m, m[cov_m]);
  link.femto = make(a_f, n_f, m[cov_f]);
  link.aggregate = link.macro.rate * link.macro.association + link.femto.rate * link.femto.association;
  link.equivalent_aggregate = kNaN;
  return link;
}

using Statistic = std::function<double(std::span<const double>)>;

std::vector<std::pair<std::string, Statistic>> statistics_for(double gamma) {
  std::vector<std::pair<std::string, Statistic>> s;
  auto slot = [](std::size_t i) { return [i](std::span<const double> m) { return m[i]; }; };
  auto dl = [gamma](std::span<const double> m) { return link_from_means(m, gamma, kCovDlM, kCovDlF, false); };
  auto ulc = [gamma](std::span<const double> m) { return link_from_means(m, gamma, kCovUlcM, kCovUlcF, false); };
  auto uld = [gamma](std::span<const double> m) { return link_from_means(m, gamma, kCovUldM, kCovUldF, true); };

  s.emplace_back("p1", slot(kCase1));
  s.emplace_back("p2", slot(kCase2));
  s.emplace_back("p3", slot(kCase3));
  s.emplace_back("p4", slot(kCase4));
  s.emplace_back("a_md", [](std::span<const double> m) { return m[kCase1] + m[kCase2]; });
  s.emplace_back("a_fd", [](std::span<const double> m) { return m[kCase3] + m[kCase4]; });
  s.emplace_back("a_mu", [](std::span<const double> m) { return m[kCase1] + m[kCase3]; });
  s.emplace_back("a_fu", [](std::span<const double> m) { return m[kCase2] + m[kCase4]; });
  s.emplace_back("load_md", [](std::span<const double> m) { return ratio(m[kLoadMd], m[kInnerM]); });
  s.emplace_back("load_fd", [](std::span<const double> m) { return ratio(m[kLoadFd], m[kInnerF]); });
  s.emplace_back("load_mu", [](std::span<const double> m) { return ratio(m[kLoadMu], m[kInnerM]); });
  s.emplace_back("load_fu", [](std::span<const double> m) { return ratio(m[kLoadFu], m[kInnerF]); });

  s.emplace_back("cov_dl_m", [dl](std::span<const double> m) { return dl(m).macro.coverage; });
  s.emplace_back("cov_dl_f", [dl](std::span<const double> m) { return dl(m).femto.coverage; });
  s.emplace_back("cov_dl", [](std::span<const double> m) { return m[kCovDlM] + m[kCovDlF]; });
  s.emplace_back("cov_ulc_m", [ulc](std::span<const double> m) { return ulc(m).macro.coverage; });
  s.emplace_back("cov_ulc_f", [ulc](std::span<const double> m) { return ulc(m).femto.coverage; });
  s.emplace_back("cov_ulc", [](std::span<const double> m) { return m[kCovUlcM] + m[kCovUlcF]; });
  s.emplace_back("cov_uld_m", [uld](std::span<const double> m) { return uld(m).macro.coverage; });
  s.emplace_back("cov_uld_f", [uld](std::span<const double> m) { return uld(m).femto.coverage; });
  s.emplace_back("cov_uld", [](std::span<const double> m) { return m[kCovUldM] + m[kCovUldF]; });

  s.emplace_back("r_dl_m", [dl](std::span<const double> m) { return dl(m).macro.rate; });
  s.emplace_back("r_dl_f", [dl](std::span<const double> m) { return dl(m).femto.rate; });
  s.emplace_back("r_dl", [dl](std::span<const double> m) { return dl(m).aggregate; });
  s.emplace_back("r_ulc_m", [ulc](std::span<const double> m) { return ulc(m).macro.rate; });
  s.emplace_back("r_ulc_f", [ulc](std::span<const double> m) { return ulc(m).femto.rate; });
  s.emplace_back("r_ul_coupled", [ulc](std::span<const double> m) { return ulc(m).aggregate; });
  s.emplace_back("r_uld_m", [uld](std::span<const double> m) { return uld(m).macro.rate; });
  s.emplace_back("r_uld_f", [uld](std::span<const double> m) { return uld(m).femto.rate; });
  s.emplace_back("r_ul_decoupled", [uld](std::span<const double> m) { return uld(m).aggregate; });

  s.emplace_back("eta_m", [ulc, uld](std::span<const double> m) { return ratio(uld(m).macro.rate, ulc(m).macro.rate); });
  s.emplace_back("eta_f", [ulc, uld](std::span<const double> m) { return ratio(uld(m).femto.rate, ulc(m).femto.rate); });
  s.emplace_back("eta_bar", [ulc, uld](std::span<const double> m) {
    const auto coupled = ulc(m);
    const auto decoupled = uld(m);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      const auto c = static_cast<AssociationCase>(i + 1);
      if (m[kCase1 + i] > 0.0) {
        sum += m[kCase1 + i] * analytic::case_gain(c, coupled, decoupled);
      }
    }
    return sum;
  });
  for (int i = 0; i < 4; ++i) {
    const auto c = static_cast<AssociationCase>(i + 1);
    s.emplace_back("eta_" + std::string(to_string(c)), [ulc, uld, c, i](std::span<const double> m) {
      return m[kCase1 + i] > 0.0 ? analytic::case_gain(c, ulc(m), uld(m)) : kNaN;
    });
  }
  // Gains measured on the devices of each case directly, without the tier mapping.
  auto direct = [ulc, uld](std::span<const double> m, int i) {
    const auto c = static_cast<AssociationCase>(i + 1);
    const Tier dl_tier = (c == AssociationCase::Case1 || c == AssociationCase::Case2) ? Tier::Macro : Tier::Femto;
    const Tier ul_tier = (c == AssociationCase::Case1 || c == AssociationCase::Case3) ? Tier::Macro : Tier::Femto;
    const double with = ratio(m[kCovUldCase1 + i], uld(m).tier(ul_tier).load);
    const double without = ratio(m[kCovUlcCase1 + i], ulc(m).tier(dl_tier).load);
    return m[kCase1 + i] > 0.0 ? ratio(with, without) : kNaN;
  };
  for (int i = 0; i < 4; ++i) {
    const auto c = static_cast<AssociationCase>(i + 1);
    s.emplace_back("eta_" + std::string(to_string(c)) + "_direct",
                   [direct, i](std::span<const double> m) { return direct(m, i); });
  }
  s.emplace_back("eta_bar_direct", [direct](std::span<const double> m) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (m[kCase1 + i] > 0.0) {
        sum += m[kCase1 + i] * direct(m, i);
      }
    }
    return sum;
  });
  return s;
}

bool in_scope(const std::string& name, Scope scope) {
  const bool association = name.starts_with("p") || name.starts_with("a_");
  switch (scope) {
    case Scope::Association: return association;
    case Scope::Loads: return association || name.starts_with("load_");
    case Scope::Coverage: return association || name.starts_with("cov_");
    case Scope::Full: return true;
  }
  return false;
}

}  // namespace

std::string to_string(SimMode mode) { return mode == SimMode::Accurate ? "accurate" : "approx"; }

SimMode parse_mode(const std::string& text) {
  if (text == "accurate" || text == "acc") {
    return SimMode::Accurate;
  }
  if (text == "approx" || text == "approximate") {
    return SimMode::Approximate;
  }
  throw ParameterError("mode: expected 'accurate' or 'approx', got '" + text + "'");
}

WindowPlan plan_windows(const NetworkConfig& cfg, const Options& opts) {
  if (!(opts.window_factor >= kAssociationWindowFactor) || !std::isfinite(opts.window_factor)) {
    throw ParameterError("window_factor: must be finite and >= 5");
  }
  const double lambda_min = cfg.min_bs_density();
  const double assoc_radius = window_radius_for(lambda_min, kAssociationWindowFactor);
  const double wide_radius = window_radius_for(lambda_min, opts.window_factor);
  WindowPlan plan;
  switch (opts.scope) {
    case Scope::Association:
      plan.bs_radius = assoc_radius;
      break;
    case Scope::Loads:
      plan.bs_radius = assoc_radius;
      plan.device_radius = assoc_radius;
      break;
    case Scope::Coverage:
      plan.bs_radius = wide_radius;
      plan.device_radius = opts.mode == SimMode::Accurate ? wide_radius : 0.0;
      break;
    case Scope::Full:
      plan.bs_radius = wide_radius;
      plan.device_radius = opts.mode == SimMode::Accurate ? wide_radius : assoc_radius;
      break;
  }
  plan.interferer_radius = plan.bs_radius;
  return plan;
}

Deployment draw_deployment(const NetworkConfig& cfg, RngSeed seed, std::uint64_t index, const WindowPlan& plan) {
  const RngSeed base = seed.derive(index);
  for (unsigned attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const RngSeed s = attempt == 0 ? base : base.derive(stream::kRetry).derive(attempt);
    Deployment dep;
    dep.mbs = sample_ppp(cfg.lambda_m, plan.bs_radius, s.derive(stream::kMacro));
    dep.fbs = sample_ppp(cfg.lambda_f, plan.bs_radius, s.derive(stream::kFemto));
    if ((cfg.lambda_m > 0.0 && dep.mbs.empty()) || (cfg.lambda_f > 0.0 && dep.fbs.empty())) {
      continue;
    }
    if (plan.device_radius > 0.0) {
      dep.devices = sample_ppp(cfg.lambda_d, plan.device_radius, s.derive(stream::kDevices));
    } else {
      dep.devices = PointSet({}, plan.bs_radius, 0.0);
    }
    dep.stream = s;
    dep.redraws = attempt;
    return dep;
  }
  throw NoCandidateError("draw_deployment: a BS tier stayed empty after 1000 redraws; enlarge the window");
}

AssociationOutcome associate_point(const NetworkConfig& cfg, const std::optional<NearestPoint>& macro,
                                   const std::optional<NearestPoint>& femto) {
  if (!macro) {
    throw NoCandidateError("associate: no MBS in the window");
  }
  AssociationOutcome out;
  const AccessPoint m{{Tier::Macro, macro->index}, macro->distance};
  if (!femto) {
    out.dlap = m;
    out.ulap = m;
    out.association_case = AssociationCase::Case1;
    return out;
  }
  const AccessPoint f{{Tier::Femto, femto->index}, femto->distance};
  // P_M d_M^-alpha > P_F d_F^-alpha  <=>  d_F > (P_F/P_M)^(1/alpha) d_M. With
  // P_F <= P_M the scaled distance never exceeds d_M, so d_M < d_F always
  // yields an MBS DLAP and Case 3 cannot occur even under rounding.
  const double shrink = std::pow(cfg.p_f / cfg.p_m, 1.0 / cfg.alpha);
  out.dlap = f.distance > shrink * m.distance ? m : f;
  out.ulap = m.distance < f.distance ? m : f;
  out.association_case = case_from(out.dlap.bs.tier, out.ulap.bs.tier);
  return out;
}

AssociationOutcome associate(const Deployment& dep, const NetworkConfig& cfg) {
  if (dep.mbs.empty() || (cfg.lambda_f > 0.0 && dep.fbs.empty())) {
    throw NoCandidateError("associate: a BS tier with positive density is empty; redraw the realization");
  }
  const Point2 origin{};
  std::optional<NearestPoint> femto;
  if (!dep.fbs.empty()) {
    femto = nearest(dep.fbs, origin);
  }
  return associate_point(cfg, nearest(dep.mbs, origin), femto);
}

FadingStream::FadingStream(RngSeed seed, double scale) : engine_(make_engine(seed)), scale_(scale) {}

FadingStream FadingStream::constant(double h) {
  FadingStream f;
  f.scale_ = h;
  f.constant_ = true;
  return f;
}

double FadingStream::next() { return constant_ ? scale_ : scale_ * exp_(engine_); }

double path_gain(double squared_distance, double alpha) {
  if (alpha == 4.0) {
    return 1.0 / (squared_distance * squared_distance);
  }
  return std::pow(squared_distance, -0.5 * alpha);
}

double dl_sinr(const Deployment& dep, const AssociationOutcome& out, const NetworkConfig& cfg, FadingStream& fading) {
  const BsRef serving = out.dlap.bs;
  const double signal =
      cfg.power(serving.tier) * fading.next() * path_gain(out.dlap.distance * out.dlap.distance, cfg.alpha);
  double interference = 0.0;
  for (Tier t : {Tier::Macro, Tier::Femto}) {
    const PointSet& bs = dep.tier(t);
    const double power = cfg.power(t);
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (t == serving.tier && i == serving.index) {
        continue;
      }
      interference += power * fading.next() * path_gain(squared_norm(bs[i]), cfg.alpha);
    }
  }
  return signal / (interference + cfg.noise);
}

namespace {

template <typename Visit>
void associate_devices(const Deployment& dep, const NetworkConfig& cfg, Visit&& visit) {
  const GridIndex macro_index(dep.mbs);
  const GridIndex femto_index(dep.fbs);
  for (std::size_t d = 0; d < dep.devices.size(); ++d) {
    const Point2 where = dep.devices[d];
    std::optional<NearestPoint> femto;
    if (!dep.fbs.empty()) {
      femto = femto_index.nearest(where);
    }
    visit(d, associate_point(cfg, macro_index.nearest(where), femto));
  }
}

}  // namespace

CellAssignments assign_cells(const Deployment& dep, const NetworkConfig& cfg) {
  CellAssignments cells;
  for (auto* assignment : {&cells.downlink, &cells.uplink}) {
    assignment->members[0].assign(dep.mbs.size(), {});
    assignment->members[1].assign(dep.fbs.size(), {});
  }
  associate_devices(dep, cfg, [&](std::size_t d, const AssociationOutcome& out) {
    cells.downlink.members[tier_slot(out.dlap.bs.tier)][out.dlap.bs.index].push_back(d);
    cells.uplink.members[tier_slot(out.ulap.bs.tier)][out.ulap.bs.index].push_back(d);
  });
  return cells;
}

PointSet approximate_interferers(const NetworkConfig& cfg, double serving_distance, double radius, RngSeed seed) {
  const PointSet field = sample_ppp(cfg.interferer_density(), radius, seed);
  const double excluded2 = serving_distance * serving_distance;
  std::vector<Point2> kept;
  kept.reserve(field.size());
  for (const auto& p : field.points()) {
    if (squared_norm(p) > excluded2) {
      kept.push_back(p);
    }
  }
  return PointSet(std::move(kept), radius, field.intensity());
}

PointSet accurate_interferers(const Deployment& dep, const CellAssignment& cells, BsRef serving, RngSeed seed) {
  auto engine = make_engine(seed);
  std::vector<Point2> active;
  for (Tier t : {Tier::Macro, Tier::Femto}) {
    const auto& tier_cells = cells.members[tier_slot(t)];
    for (std::size_t b = 0; b < tier_cells.size(); ++b) {
      // the serving BS schedules the typical device itself
      if (BsRef{t, b} == serving || tier_cells[b].empty()) {
        continue;
      }
      std::uniform_int_distribution<std::size_t> pick(0, tier_cells[b].size() - 1);
      active.push_back(dep.devices[tier_cells[b][pick(engine)]]);
    }
  }
  return PointSet(std::move(active), dep.devices.window_radius(), dep.mbs.intensity() + dep.fbs.intensity(),
                  dep.devices.center());
}

double ul_sinr(const Deployment& dep, const AssociationOutcome& out, const NetworkConfig& cfg,
               const UplinkOptions& opts, FadingStream& fading, const CellAssignments* cells) {
  const AccessPoint& serving = out.serving(opts.rule);
  const bool coupled = opts.rule == UplinkRule::Coupled;
  const double signal = cfg.p_d * fading.next() * path_gain(serving.distance * serving.distance, cfg.alpha);

  PointSet interferers;
  if (opts.mode == SimMode::Approximate) {
    if (!(opts.interferer_radius > 0.0)) {
      throw ParameterError("ul_sinr: approximate mode needs a positive interferer radius");
    }
    // drawn directly in the frame centered on the receiving BS
    interferers = approximate_interferers(
        cfg, serving.distance, opts.interferer_radius,
        dep.stream.derive(coupled ? stream::kInterferersCoupled : stream::kInterferersDecoupled));
  } else {
    if (cells == nullptr) {
      throw ParameterError("ul_sinr: accurate mode needs the cell assignment");
    }
    const Point2 bs_position = dep.tier(serving.bs.tier)[serving.bs.index];
    const PointSet active = accurate_interferers(dep, cells->for_rule(opts.rule), serving.bs,
                                                 dep.stream.derive(stream::kScheduling).derive(coupled ? 0 : 1));
    interferers = translate(active, -bs_position);
  }

  double interference = 0.0;
  for (const auto& p : interferers.points()) {
    interference += cfg.p_d * fading.next() * path_gain(squared_norm(p), cfg.alpha);
  }
  return signal / (interference + cfg.noise);
}

LoadTally tally_loads(const Deployment& dep, const NetworkConfig& cfg, double inner_radius) {
  LoadTally tally;
  const double inner2 = inner_radius * inner_radius;
  std::array<std::vector<char>, 2> inner;
  for (Tier t : {Tier::Macro, Tier::Femto}) {
    const PointSet& bs = dep.tier(t);
    const std::size_t k = tier_slot(t);
    inner[k].resize(bs.size());
    for (std::size_t b = 0; b < bs.size(); ++b) {
      inner[k][b] = squared_norm(bs[b]) <= inner2 ? 1 : 0;
      tally.stations[k] += inner[k][b];
    }
  }
  associate_devices(dep, cfg, [&](std::size_t, const AssociationOutcome& out) {
    const std::size_t dl = tier_slot(out.dlap.bs.tier);
    const std::size_t ul = tier_slot(out.ulap.bs.tier);
    tally.devices_dl[dl] += inner[dl][out.dlap.bs.index];
    tally.devices_ul[ul] += inner[ul][out.ulap.bs.index];
  });
  return tally;
}

LoadTally tally_loads(const Deployment& dep, const CellAssignments& cells, double inner_radius) {
  LoadTally tally;
  const double inner2 = inner_radius * inner_radius;
  for (Tier t : {Tier::Macro, Tier::Femto}) {
    const PointSet& bs = dep.tier(t);
    const std::size_t k = tier_slot(t);
    for (std::size_t b = 0; b < bs.size(); ++b) {
      if (squared_norm(bs[b]) > inner2) {
        continue;
      }
      tally.stations[k] += 1.0;
      tally.devices_dl[k] += static_cast<double>(cells.downlink.members[k][b].size());
      tally.devices_ul[k] += static_cast<double>(cells.uplink.members[k][b].size());
    }
  }
  return tally;
}

const McEstimate& Report::at(const std::string& name) const {
  for (const auto& [key, value] : scalars) {
    if (key == name) {
      return value;
    }
  }
  throw ParameterError("mc::Report: no scalar named '" + name + "'");
}

std::vector<std::string> scalar_names() {
  std::vector<std::string> names;
  for (const auto& [name, statistic] : statistics_for(1.0)) {
    names.push_back(name);
  }
  return names;
}

unsigned default_workers() {
  if (const char* env = std::getenv("HETNET_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) {
      return static_cast<unsigned>(v);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Report estimate(const NetworkConfig& cfg, double gamma, const Options& opts) {
  cfg.validate();
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw ParameterError("estimate: target SINR must be finite and > 0");
  }
  if (opts.samples < kMinSamples) {
    throw ParameterError("samples: at least " + std::to_string(kMinSamples) + " realizations are required");
  }
  const WindowPlan plan = plan_windows(cfg, opts);

  const std::uint64_t n_chunks = (opts.samples + kChunk - 1) / kChunk;
  std::vector<ChunkResult> chunks(n_chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    std::array<double, kDim> y{};
    while (true) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) {
        return;
      }
      try {
        const std::uint64_t end = std::min(opts.samples, (c + 1) * kChunk);
        for (std::uint64_t i = c * kChunk; i < end; ++i) {
          simulate(cfg, gamma, opts, plan, i, chunks[c], y);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(n_chunks);
        return;
      }
    }
  };

  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::uint64_t>(opts.workers > 0 ? opts.workers : default_workers(), n_chunks));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  // merge in chunk order so the result does not depend on the worker count
  ChunkResult total;
  for (const auto& c : chunks) {
    total.moments.merge(c.moments);
    total.redraws += c.redraws;
    total.order_violations += c.order_violations;
    for (std::size_t k = 0; k < 4; ++k) {
      total.cases[k] += c.cases[k];
    }
  }

  Report report;
  report.target_sinr = gamma;
  report.options = opts;
  report.windows = plan;
  report.realizations = total.moments.count();
  report.redraws = total.redraws;
  report.case_counts = total.cases;
  report.distance_order_violations = total.order_violations;
  for (const auto& [name, statistic] : statistics_for(gamma)) {
    if (in_scope(name, opts.scope)) {
      report.scalars.emplace_back(name, total.moments.delta(statistic));
    } else {
      report.scalars.emplace_back(name, McEstimate{kNaN, kNaN, total.moments.count()});
    }
  }
  return report;
}

}  // namespace hetnet::mc
