#pragma once

#include <cstdint>

namespace rbeta {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based generator: word k of stream s is a pure function of
/// (seed, s, k), so any position is addressable without generating the
/// preceding ones and independent workers never share state.
class counter_rng {
 public:
  constexpr counter_rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull))) {}

  constexpr std::uint64_t operator()(std::uint64_t counter) const {
    return splitmix64(key_ ^ splitmix64(counter * 0xD1B54A32D192ED03ull));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const {
    return static_cast<double>((*this)(counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

}  // namespace rbeta
