#pragma once

#include <cstdint>
#include <string_view>

namespace hetnet {

enum class Tier : std::uint8_t { Macro, Femto };

/// Association rule: DL picks max average received power, UL picks the nearest BS.
enum class Rule : std::uint8_t { Downlink, Uplink };

/// DLAP/ULAP combination of a device.
enum class AssociationCase : std::uint8_t {
  Case1 = 1,  ///< DLAP = ULAP = MBS
  Case2 = 2,  ///< DLAP = MBS, ULAP = FBS (decoupled)
  Case3 = 3,  ///< DLAP = FBS, ULAP = MBS
  Case4 = 4,  ///< DLAP = ULAP = FBS
};

[[nodiscard]] AssociationCase case_from(Tier dlap, Tier ulap);
[[nodiscard]] std::string_view to_string(Tier tier);
[[nodiscard]] std::string_view to_string(AssociationCase c);

/// Two-tier network parameters in SI units: densities per m^2, powers in W.
struct NetworkConfig {
  double lambda_m = 0.0;
  double lambda_f = 0.0;
  double lambda_d = 0.0;
  double p_m = 0.0;
  double p_f = 0.0;
  double p_d = 0.0;
  double alpha = 4.0;
  double noise = 0.0;

  /// Throws ParameterError naming the first violated invariant.
  void validate() const;

  [[nodiscard]] double density(Tier t) const { return t == Tier::Macro ? lambda_m : lambda_f; }
  [[nodiscard]] double power(Tier t) const { return t == Tier::Macro ? p_m : p_f; }
  /// Density of active UL interferers after thinning, lambda_m + lambda_f.
  [[nodiscard]] double interferer_density() const { return lambda_m + lambda_f; }
  /// Thinning probability (lambda_m + lambda_f) / lambda_d.
  [[nodiscard]] double thinning_probability() const;
  /// Smallest strictly positive BS density.
  [[nodiscard]] double min_bs_density() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Default deployment: P_M=46 dBm, P_F=20 dBm, P_d=20 dBm, alpha=4,
/// sigma^2=1e-12 W, lambda_M=1/km^2, lambda_F=10 lambda_M, lambda_d=100 lambda_M.
[[nodiscard]] NetworkConfig default_network();

}  // namespace hetnet
