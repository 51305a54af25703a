#pragma once

#include <cstdint>

namespace gsync {

/// splitmix64 finalizer. Used as a counter-based hash so every random draw is a
/// pure function of its coordinates.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Top 53 bits mapped to [0, 1).
constexpr double to_unit_interval(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Hash for the unordered pair i < j under a given seed.
constexpr std::uint64_t pair_hash(std::uint64_t seed, std::uint64_t i, std::uint64_t j) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64((i << 32) | (j & 0xFFFFFFFFULL)));
}

/// Small sequential generator over splitmix64, for places that need a stream
/// rather than coordinate-addressed draws.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr double uniform() noexcept { return to_unit_interval((*this)()); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

 private:
  std::uint64_t state_;
};

}  // namespace gsync
