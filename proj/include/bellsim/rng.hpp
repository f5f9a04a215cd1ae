#pragma once

#include <cstdint>

namespace bellsim {

/// SplitMix64 finalizer (Steele/Lea/Flood mixing constants).
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// SplitMix64 generator: 64-bit state advanced by the golden-gamma constant,
/// output through mix64. Fast, tiny state, and trivially splittable: a
/// substream is just a generator started from a hashed state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Fair coin mapped to {-1, +1}.
  int next_sign() { return (next() >> 63) ? +1 : -1; }

 private:
  std::uint64_t state_;
};

/// Independent substream for one trial of a seeded run. Derived purely from
/// (seed, trial_index), so any partitioning of the trial range across threads
/// reproduces the exact same per-trial draws.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial_index) {
  return SplitMix64(mix64(seed ^ mix64(trial_index + 0x9e3779b97f4a7c15ULL)));
}

} // namespace bellsim
