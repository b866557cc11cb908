#include "hetnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "hetnet/errors.hpp"
#include "hetnet/quadrature.hpp"

namespace hetnet::analytic {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr quad::Tolerance kRadialTol{1e-8, 1e-14};
constexpr quad::Tolerance kKappaTol{1e-10, 1e-15};
constexpr double kEquivalenceTol = 1e-6;

Tier other(Tier t) { return t == Tier::Macro ? Tier::Femto : Tier::Macro; }

void require_gamma(double gamma) {
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw ParameterError("target SINR must be finite and > 0 (linear), got " + std::to_string(gamma));
  }
}

// int_0^inf exp(-t) exp(-noise_coeff * (t / (pi * rate))^(alpha/2)) dt, i.e. the
// radial coverage integral after t = pi * rate * x^2. Equals 1 without noise.
double radial_integral(double rate, double noise_coeff, double alpha, std::string_view what) {
  if (noise_coeff == 0.0) {
    return 1.0;
  }
  const double scale = 1.0 / (std::numbers::pi * rate);
  const double half_alpha = alpha / 2.0;
  return quad::integrate_half_line(
      [=](double t) { return std::exp(-t - noise_coeff * std::pow(t * scale, half_alpha)); }, kRadialTol, what);
}

// Coverage of devices served by `tier` whose serving distance follows the
// `rule` law, with interference exponent `interference_rate` (per m^2) and
// noise coefficient gamma * sigma^2 / P_tx.
double tier_coverage(const NetworkConfig& cfg, Tier tier, Rule rule, double association, double interference_rate,
                     double noise_coeff, std::string_view what) {
  if (association <= 0.0) {
    return kNaN;
  }
  const double b = serving_distance_rate(cfg, tier, rule);
  const double total = b + interference_rate;
  return cfg.density(tier) / (association * total) * radial_integral(total, noise_coeff, cfg.alpha, what);
}

TierRate make_tier_rate(const NetworkConfig& cfg, Tier tier, double association, double coverage, double gamma) {
  TierRate r;
  r.association = association;
  r.load = cfg.density(tier) > 0.0 ? mean_load(cfg, association, cfg.density(tier)) : 0.0;
  r.coverage = coverage;
  // A tier that serves nobody contributes no rate.
  r.rate = association > 0.0 ? std::log2(1.0 + gamma) * coverage / r.load : 0.0;
  return r;
}

void check_equivalence(double two_tier, double equivalent, std::string_view what) {
  const double scale = std::max(std::abs(two_tier), std::abs(equivalent));
  if (scale > 0.0 && std::abs(two_tier - equivalent) > kEquivalenceTol * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": two-tier aggregate " << two_tier << " disagrees with equivalent model " << equivalent;
    throw NumericError(msg.str());
  }
}

}  // namespace

double CaseProbabilities::operator[](AssociationCase c) const {
  switch (c) {
    case AssociationCase::Case1: return p1;
    case AssociationCase::Case2: return p2;
    case AssociationCase::Case3: return p3;
    case AssociationCase::Case4: return p4;
  }
  return kNaN;
}

double power_range_factor(const NetworkConfig& cfg) { return std::pow(cfg.p_m / cfg.p_f, 2.0 / cfg.alpha); }

CaseProbabilities case_probabilities(const NetworkConfig& cfg) {
  cfg.validate();
  const double c = power_range_factor(cfg);
  const double lm = cfg.lambda_m;
  const double lf = cfg.lambda_f;
  CaseProbabilities cp;
  cp.p1 = lm / (lm + lf);
  cp.p4 = lf / (lf + c * lm);
  // Region 2 lies between the UL boundary and the power-shifted DL boundary.
  cp.p2 = lf / (lf + lm) - cp.p4;
  cp.p3 = 0.0;
  return cp;
}

DecouplingPeak decoupling_peak(const NetworkConfig& cfg, double ratio_lo, double ratio_hi) {
  if (!(ratio_lo > 0.0) || !(ratio_hi >= ratio_lo) || !std::isfinite(ratio_hi)) {
    throw ParameterError("decoupling_peak: ratio range must be positive and ordered");
  }
  cfg.validate();
  auto p2_at_log = [&](double log_ratio) {
    NetworkConfig probe = cfg;
    probe.lambda_f = std::exp(log_ratio) * cfg.lambda_m;
    probe.lambda_d = std::max(cfg.lambda_d, probe.lambda_m + probe.lambda_f);
    return case_probabilities(probe).p2;
  };

  const double lo = std::log(ratio_lo);
  const double hi = std::log(ratio_hi);
  constexpr int kGrid = 257;
  int best = 0;
  double best_p = -1.0;
  std::array<double, kGrid> grid{};
  for (int i = 0; i < kGrid; ++i) {
    grid[i] = lo + (hi - lo) * i / (kGrid - 1);
    const double p = p2_at_log(grid[i]);
    if (p > best_p) {
      best_p = p;
      best = i;
    }
  }
  if (best_p <= 0.0 || hi == lo) {
    return {std::exp(grid[best]), std::max(best_p, 0.0)};
  }

  // golden-section search for the maximum inside the bracketing grid cells
  double a = grid[std::max(best - 1, 0)];
  double b = grid[std::min(best + 1, kGrid - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = p2_at_log(x1);
  double f2 = p2_at_log(x2);
  // log-ratio width 1e-9 is far below the 1e-6 relative target on the ratio
  while (b - a > 1e-9) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = p2_at_log(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = p2_at_log(x1);
    }
  }
  const double arg = 0.5 * (a + b);
  return {std::exp(arg), p2_at_log(arg)};
}

double TierAssociation::operator()(Tier tier, Rule rule) const {
  if (rule == Rule::Downlink) {
    return tier == Tier::Macro ? a_md : a_fd;
  }
  return tier == Tier::Macro ? a_mu : a_fu;
}

TierAssociation tier_association(const CaseProbabilities& cp) {
  return {cp.p1 + cp.p2, cp.p3 + cp.p4, cp.p1 + cp.p3, cp.p2 + cp.p4};
}

double mean_load(const NetworkConfig& cfg, double association_prob, double tier_density) {
  if (!(tier_density > 0.0)) {
    throw ParameterError("mean_load: tier density must be > 0");
  }
  return cfg.lambda_d * association_prob / tier_density;
}

double serving_distance_rate(const NetworkConfig& cfg, Tier tier, Rule rule) {
  const Tier u = other(tier);
  if (rule == Rule::Uplink) {
    return cfg.density(tier) + cfg.density(u);
  }
  return cfg.density(tier) + cfg.density(u) * std::pow(cfg.power(u) / cfg.power(tier), 2.0 / cfg.alpha);
}

double serving_distance_pdf(const NetworkConfig& cfg, Tier tier, Rule rule, double x) {
  if (x < 0.0) {
    throw ParameterError("serving_distance_pdf: distance must be >= 0");
  }
  const double rate = serving_distance_rate(cfg, tier, rule);
  const double a = tier_association(case_probabilities(cfg))(tier, rule);
  if (a <= 0.0) {
    return 0.0;
  }
  return 2.0 * std::numbers::pi * cfg.density(tier) / a * x * std::exp(-rate * std::numbers::pi * x * x);
}

double kappa(double alpha, double gamma) {
  if (!(alpha > 2.0)) {
    throw ParameterError("kappa: interference integral diverges for alpha <= 2");
  }
  require_gamma(gamma);
  const double g = std::pow(gamma, 2.0 / alpha);
  const double h = alpha / 2.0;
  // u = (upper * r)^(-1/(h-1)) maps [gamma^(-2/alpha), inf) onto (0, 1] with a bounded integrand
  const double m = 1.0 / (h - 1.0);
  const double upper = std::pow(g, h - 1.0);
  const double integral =
      upper * quad::integrate_interval([=](double r) { return m / (1.0 + std::pow(upper * r, h * m)); }, 0.0, 1.0,
                                       kKappaTol, "kappa");
  return g * integral;
}

LinkThroughput dl_throughput(const NetworkConfig& cfg, double gamma) {
  require_gamma(gamma);
  const auto assoc = tier_association(case_probabilities(cfg));
  const double k = kappa(cfg.alpha, gamma);
  LinkThroughput out;
  for (Tier t : {Tier::Macro, Tier::Femto}) {
    const double a = assoc(t, Rule::Downlink);
    // interferers of both tiers sit beyond the power-scaled serving distance
    const double interference = serving_distance_rate(cfg, t, Rule::Downlink) * k;
    const double cov = tier_coverage(cfg, t, Rule::Downlink, a, interference, gamma * cfg.noise / cfg.power(t),
                                     t == Tier::Macro ? "DL coverage (MBS)" : "DL coverage (FBS)");
    (t == Tier::Macro ? out.macro : out.femto) = make_tier_rate(cfg, t, a, cov, gamma);
  }
  out.aggregate = out.macro.rate * out.macro.association + out.femto.rate * out.femto.association;
  out.equivalent_aggregate = dl_throughput_equivalent(cfg, gamma);
  return out;
}

double equivalent_dl_density(const NetworkConfig& cfg) {
  cfg.validate();
  const double e = 2.0 / cfg.alpha;
  return cfg.lambda_m * std::pow(cfg.p_m, e) + cfg.lambda_f * std::pow(cfg.p_f, e);
}

double dl_coverage_equivalent(const NetworkConfig& cfg, double gamma) {
  require_gamma(gamma);
  const double lt = equivalent_dl_density(cfg);
  const double k = kappa(cfg.alpha, gamma);
  // powers are folded into the equivalent density, so the noise term carries no power divisor
  return radial_integral(lt * (1.0 + k), gamma * cfg.noise, cfg.alpha, "equivalent DL coverage") / (1.0 + k);
}

double dl_throughput_equivalent(const NetworkConfig& cfg, double gamma) {
  // Load per BS counts physical BSs: lambda_d / (lambda_M + lambda_F).
  const double load = cfg.lambda_d / (cfg.lambda_m + cfg.lambda_f);
  return std::log2(1.0 + gamma) * dl_coverage_equivalent(cfg, gamma) / load;
}

LinkThroughput ul_throughput(const NetworkConfig& cfg, double gamma, bool decoupled) {
  require_gamma(gamma);
  const auto assoc = tier_association(case_probabilities(cfg));
  const double k = kappa(cfg.alpha, gamma);
  const Rule rule = decoupled ? Rule::Uplink : Rule::Downlink;
  const double interference = cfg.interferer_density() * k;
  const double noise_coeff = gamma * cfg.noise / cfg.p_d;
  LinkThroughput out;
  for (Tier t : {Tier::Macro, Tier::Femto}) {
    const double a = assoc(t, rule);
    const double cov = tier_coverage(cfg, t, rule, a, interference, noise_coeff,
                                     t == Tier::Macro ? "UL coverage (MBS)" : "UL coverage (FBS)");
    (t == Tier::Macro ? out.macro : out.femto) = make_tier_rate(cfg, t, a, cov, gamma);
  }
  out.aggregate = out.macro.rate * out.macro.association + out.femto.rate * out.femto.association;
  if (decoupled) {
    out.equivalent_aggregate = ul_throughput_equivalent(cfg, gamma);
    check_equivalence(out.aggregate, out.equivalent_aggregate, "decoupled UL");
  } else {
    out.equivalent_aggregate = kNaN;
  }
  return out;
}

double ul_throughput_equivalent(const NetworkConfig& cfg, double gamma) {
  require_gamma(gamma);
  cfg.validate();
  const double lmf = cfg.lambda_m + cfg.lambda_f;
  const double k = kappa(cfg.alpha, gamma);
  const double total = lmf + cfg.interferer_density() * k;
  const double coverage =
      lmf / total * radial_integral(total, gamma * cfg.noise / cfg.p_d, cfg.alpha, "equivalent UL coverage");
  const double load = cfg.lambda_d / lmf;
  return std::log2(1.0 + gamma) * coverage / load;
}

double case_gain(AssociationCase c, const LinkThroughput& coupled, const LinkThroughput& decoupled) {
  Tier dlap = Tier::Macro;
  Tier ulap = Tier::Macro;
  switch (c) {
    case AssociationCase::Case1: dlap = Tier::Macro; ulap = Tier::Macro; break;
    case AssociationCase::Case2: dlap = Tier::Macro; ulap = Tier::Femto; break;
    case AssociationCase::Case3: dlap = Tier::Femto; ulap = Tier::Macro; break;
    case AssociationCase::Case4: dlap = Tier::Femto; ulap = Tier::Femto; break;
  }
  const double denom = coupled.tier(dlap).rate;
  if (!(denom > 0.0)) {
    return kNaN;
  }
  return decoupled.tier(ulap).rate / denom;
}

ThroughputGains throughput_gains(const NetworkConfig& cfg, double gamma) {
  const auto cp = case_probabilities(cfg);
  const auto coupled = ul_throughput(cfg, gamma, false);
  const auto decoupled = ul_throughput(cfg, gamma, true);

  auto tier_gain = [](const TierRate& with, const TierRate& without) {
    if (with.association <= 0.0 && without.association <= 0.0) {
      return kNaN;
    }
    return without.rate > 0.0 ? with.rate / without.rate : kNaN;
  };

  ThroughputGains g;
  g.eta_m = tier_gain(decoupled.macro, coupled.macro);
  g.eta_f = tier_gain(decoupled.femto, coupled.femto);
  g.eta_bar = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto c = static_cast<AssociationCase>(i + 1);
    const double p = cp[c];
    if (p <= 0.0) {
      g.eta_case[i] = kNaN;
      continue;
    }
    g.eta_case[i] = case_gain(c, coupled, decoupled);
    if (!std::isfinite(g.eta_case[i])) {
      throw DegenerateConfigError("throughput_gains: zero coupled UL rate for " + std::string(to_string(c)));
    }
    g.eta_bar += p * g.eta_case[i];
  }
  return g;
}

Report evaluate(const NetworkConfig& cfg, double gamma) {
  require_gamma(gamma);
  Report r;
  r.target_sinr = gamma;
  r.cases = case_probabilities(cfg);
  r.association = tier_association(r.cases);
  r.load_md = mean_load(cfg, r.association.a_md, cfg.lambda_m);
  r.load_mu = mean_load(cfg, r.association.a_mu, cfg.lambda_m);
  r.load_fd = cfg.lambda_f > 0.0 ? mean_load(cfg, r.association.a_fd, cfg.lambda_f) : 0.0;
  r.load_fu = cfg.lambda_f > 0.0 ? mean_load(cfg, r.association.a_fu, cfg.lambda_f) : 0.0;
  r.kappa = kappa(cfg.alpha, gamma);
  r.dl = dl_throughput(cfg, gamma);
  r.ul_coupled = ul_throughput(cfg, gamma, false);
  r.ul_decoupled = ul_throughput(cfg, gamma, true);
  r.gains = throughput_gains(cfg, gamma);
  return r;
}

}  // namespace hetnet::analytic
