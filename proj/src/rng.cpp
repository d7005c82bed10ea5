#include "tbc/rng.hpp"

#include <cmath>
#include <numbers>

namespace tbc {

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
  return splitmix64_mix(splitmix64_mix(seed) ^ splitmix64_mix(index + kSplitMixGamma));
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace tbc
