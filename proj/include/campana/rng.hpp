#pragma once

#include <cstdint>

namespace campana {

/// Counter-based generator: the value at (stream, counter) is a fixed
/// function of the seed, so shards can be drawn in any order or thread.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    return mix(key_ ^ mix(stream * 0x9e3779b97f4a7c15ULL + 0xbb67ae8584caa73bULL) ^ (counter * 0xd1b54a32d192ed03ULL));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

 private:
  // splitmix64 finaliser
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace campana
