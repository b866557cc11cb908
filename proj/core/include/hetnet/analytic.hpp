#pragma once

#include <array>

#include "hetnet/network_config.hpp"

namespace hetnet::analytic {

/// Joint DLAP/ULAP case probabilities under max-average-power DL and
/// nearest-BS UL association.
struct CaseProbabilities {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;

  [[nodiscard]] double operator[](AssociationCase c) const;
  [[nodiscard]] double sum() const { return p1 + p2 + p3 + p4; }
};

[[nodiscard]] CaseProbabilities case_probabilities(const NetworkConfig& cfg);

/// (P_M / P_F)^(2/alpha): how much farther an MBS may be than an FBS and still win the DL.
[[nodiscard]] double power_range_factor(const NetworkConfig& cfg);

struct DecouplingPeak {
  double ratio = 0.0;        ///< lambda_F / lambda_M at the maximum of Pr(Case 2)
  double probability = 0.0;  ///< Pr(Case 2) at that ratio
};

/// Maximum of Pr(Case 2) over lambda_F/lambda_M in [ratio_lo, ratio_hi]:
/// log-spaced grid scan, then golden-section refinement.
[[nodiscard]] DecouplingPeak decoupling_peak(const NetworkConfig& cfg, double ratio_lo, double ratio_hi);

/// Per-tier association probabilities A_{v,n}.
struct TierAssociation {
  double a_md = 0.0;
  double a_fd = 0.0;
  double a_mu = 0.0;
  double a_fu = 0.0;

  [[nodiscard]] double operator()(Tier tier, Rule rule) const;
};

[[nodiscard]] TierAssociation tier_association(const CaseProbabilities& cp);

/// Mean number of devices per BS, lambda_d * a / tier_density.
[[nodiscard]] double mean_load(const NetworkConfig& cfg, double association_prob, double tier_density);

/// Exponent rate B of the serving-distance law f(x) = (2 pi lambda_v / A) x exp(-B pi x^2).
[[nodiscard]] double serving_distance_rate(const NetworkConfig& cfg, Tier tier, Rule rule);

/// Density of the distance to the serving BS for devices attached to `tier` under `rule`.
[[nodiscard]] double serving_distance_pdf(const NetworkConfig& cfg, Tier tier, Rule rule, double x);

/// Normalized interference integral gamma^(2/alpha) * int_{gamma^(-2/alpha)}^inf du / (1 + u^(alpha/2)).
[[nodiscard]] double kappa(double alpha, double gamma);

/// Coverage, load and rate of the devices one tier serves.
struct TierRate {
  double association = 0.0;  ///< A_{v,n}
  double load = 0.0;         ///< N_{v,n}
  double coverage = 0.0;     ///< P_{c,v,m}; NaN when the tier serves nobody
  double rate = 0.0;         ///< R_{v,m,n} in bit/s/Hz
};

struct LinkThroughput {
  TierRate macro;
  TierRate femto;
  double aggregate = 0.0;            ///< sum over tiers of rate * association
  double equivalent_aggregate = 0.0;  ///< same quantity from the homogeneous equivalent model

  [[nodiscard]] const TierRate& tier(Tier t) const { return t == Tier::Macro ? macro : femto; }
};

/// Downlink throughput under DL association. `gamma` is the linear target SINR.
[[nodiscard]] LinkThroughput dl_throughput(const NetworkConfig& cfg, double gamma);

/// Intensity of the single-tier process equivalent to both tiers in the DL,
/// (lambda_M + lambda_F) * E[Z^(2/alpha)] with Z the transmit power of a random BS.
[[nodiscard]] double equivalent_dl_density(const NetworkConfig& cfg);

/// Coverage integral of the equivalent DL model.
[[nodiscard]] double dl_coverage_equivalent(const NetworkConfig& cfg, double gamma);

/// Average DL throughput from the equivalent homogeneous model.
[[nodiscard]] double dl_throughput_equivalent(const NetworkConfig& cfg, double gamma);

/// Uplink throughput. decoupled=false serves the UL at the DLAP (DL rule
/// distances and loads); decoupled=true serves it at the nearest BS.
/// In the decoupled case `equivalent_aggregate` is the homogeneous form and
/// must agree with `aggregate`; a mismatch throws NumericError.
[[nodiscard]] LinkThroughput ul_throughput(const NetworkConfig& cfg, double gamma, bool decoupled);

/// Average decoupled UL throughput from the homogeneous equivalent model.
[[nodiscard]] double ul_throughput_equivalent(const NetworkConfig& cfg, double gamma);

struct ThroughputGains {
  double eta_m = 0.0;  ///< decoupled / coupled UL rate on MBS-served devices
  double eta_f = 0.0;  ///< decoupled / coupled UL rate on FBS-served devices
  double eta_bar = 0.0;
  std::array<double, 4> eta_case{};  ///< eta(Case i), indices 0..3; NaN where Pr(Case i) = 0
};

/// eta(Case i) as a ratio of per-tier UL rates: decoupled rate at the ULAP tier
/// over coupled rate at the DLAP tier.
[[nodiscard]] double case_gain(AssociationCase c, const LinkThroughput& coupled, const LinkThroughput& decoupled);

[[nodiscard]] ThroughputGains throughput_gains(const NetworkConfig& cfg, double gamma);

/// Every analytic scalar at one target SINR.
struct Report {
  double target_sinr = 0.0;  ///< linear
  CaseProbabilities cases;
  TierAssociation association;
  double load_md = 0.0;
  double load_fd = 0.0;
  double load_mu = 0.0;
  double load_fu = 0.0;
  double kappa = 0.0;
  LinkThroughput dl;
  LinkThroughput ul_coupled;
  LinkThroughput ul_decoupled;
  ThroughputGains gains;
};

[[nodiscard]] Report evaluate(const NetworkConfig& cfg, double gamma);

}  // namespace hetnet::analytic
