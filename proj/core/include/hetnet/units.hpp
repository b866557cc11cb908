#pragma once

#include <cmath>

namespace hetnet::units {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline constexpr double kSquareMetersPerSquareKm = 1e6;

inline constexpr double per_km2_to_per_m2(double per_km2) { return per_km2 / kSquareMetersPerSquareKm; }
inline constexpr double per_m2_to_per_km2(double per_m2) { return per_m2 * kSquareMetersPerSquareKm; }

}  // namespace hetnet::units
