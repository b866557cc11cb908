#include "hetnet/network_config.hpp"

#include <cmath>
#include <string>

#include "hetnet/errors.hpp"
#include "hetnet/units.hpp"

namespace hetnet {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw ParameterError(message);
  }
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

AssociationCase case_from(Tier dlap, Tier ulap) {
  if (dlap == Tier::Macro) {
    return ulap == Tier::Macro ? AssociationCase::Case1 : AssociationCase::Case2;
  }
  return ulap == Tier::Macro ? AssociationCase::Case3 : AssociationCase::Case4;
}

std::string_view to_string(Tier tier) { return tier == Tier::Macro ? "M" : "F"; }

std::string_view to_string(AssociationCase c) {
  switch (c) {
    case AssociationCase::Case1: return "case1";
    case AssociationCase::Case2: return "case2";
    case AssociationCase::Case3: return "case3";
    case AssociationCase::Case4: return "case4";
  }
  return "unknown";
}

void NetworkConfig::validate() const {
  require(std::isfinite(lambda_m) && lambda_m > 0.0, "lambda_m: MBS density must be finite and > 0");
  require(finite_nonneg(lambda_f), "lambda_f: FBS density must be finite and >= 0");
  require(finite_nonneg(lambda_d), "lambda_d: device density must be finite and >= 0");
  require(lambda_d >= lambda_m + lambda_f,
          "lambda_d: device density must be >= lambda_m + lambda_f (thinning probability would exceed 1)");
  require(std::isfinite(p_f) && p_f > 0.0, "p_f: FBS power must be finite and > 0");
  require(std::isfinite(p_m) && p_m >= p_f, "p_m: MBS power must be finite and >= p_f");
  require(std::isfinite(p_d) && p_d > 0.0, "p_d: device power must be finite and > 0");
  require(std::isfinite(alpha) && alpha > 2.0, "alpha: path-loss exponent must be > 2");
  require(finite_nonneg(noise), "noise: noise power must be finite and >= 0");
}

double NetworkConfig::thinning_probability() const {
  if (!(lambda_d > 0.0)) {
    throw ParameterError("lambda_d: thinning probability needs a positive device density");
  }
  return (lambda_m + lambda_f) / lambda_d;
}

double NetworkConfig::min_bs_density() const {
  if (lambda_f > 0.0 && lambda_f < lambda_m) {
    return lambda_f;
  }
  return lambda_m;
}

NetworkConfig default_network() {
  NetworkConfig cfg;
  cfg.lambda_m = units::per_km2_to_per_m2(1.0);
  cfg.lambda_f = units::per_km2_to_per_m2(10.0);
  cfg.lambda_d = units::per_km2_to_per_m2(100.0);
  cfg.p_m = units::dbm_to_watts(46.0);
  cfg.p_f = units::dbm_to_watts(20.0);
  cfg.p_d = units::dbm_to_watts(20.0);
  cfg.alpha = 4.0;
  cfg.noise = 1e-12;
  return cfg;
}

}  // namespace hetnet
