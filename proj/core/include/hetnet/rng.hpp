#pragma once

#include <cstdint>
#include <random>

namespace hetnet {

/// Root of a reproducible random stream. Child streams are derived by
/// hashing (seed, tag), so realization i of a run maps to the same numbers
/// regardless of which worker thread draws it.
struct RngSeed {
  std::uint64_t value = 0;

  [[nodiscard]] RngSeed derive(std::uint64_t tag) const;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

using Engine = std::mt19937_64;

[[nodiscard]] Engine make_engine(RngSeed seed);

/// Stream tags used when splitting one realization's seed.
namespace stream {
inline constexpr std::uint64_t kMacro = 0x4d42;
inline constexpr std::uint64_t kFemto = 0x4642;
inline constexpr std::uint64_t kDevices = 0x4456;
inline constexpr std::uint64_t kFadingDownlink = 0x4644;
inline constexpr std::uint64_t kFadingUplinkCoupled = 0x4643;
inline constexpr std::uint64_t kFadingUplinkDecoupled = 0x4655;
inline constexpr std::uint64_t kInterferersCoupled = 0x4943;
inline constexpr std::uint64_t kInterferersDecoupled = 0x4955;
inline constexpr std::uint64_t kScheduling = 0x5343;
inline constexpr std::uint64_t kRetry = 0x5254;
}  // namespace stream

}  // namespace hetnet
