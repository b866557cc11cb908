#include "hetnet/rng.hpp"

namespace hetnet {
namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngSeed RngSeed::derive(std::uint64_t tag) const {
  return RngSeed{mix(mix(value) ^ mix(tag + 0x632be59bd9b4e019ULL))};
}

Engine make_engine(RngSeed seed) { return Engine(seed.value); }

}  // namespace hetnet
