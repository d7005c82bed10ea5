#pragma once

#include <cstdint>

namespace tbc {

inline constexpr std::uint64_t kSplitMixGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key of stream `index` under `seed`; distinct streams are statistically
/// independent.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index);

/// Counter-based SplitMix64: output i is mix(key + (i + 1) * 0x9e3779b97f4a7c15).
/// The sequence is fully determined by (key, position), so results do not
/// depend on platform or standard library.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t position = 0) : key_(key), counter_(position) {}

  static CounterRng stream(std::uint64_t seed, std::uint64_t index) { return CounterRng(stream_key(seed, index)); }

  std::uint64_t next_u64() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kSplitMixGamma);
  }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, one value per two uniforms).
  double normal();

  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace tbc
