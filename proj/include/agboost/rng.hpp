#pragma once

// Reproducible random streams.
//
// Every random draw in the library comes from a SplitMix64 stream. Streams are
// derived from a master seed by folding integer keys through the SplitMix64
// finalizer:
//
//   derive_seed(seed, k1, ..., kn) = fold(mix64(seed), k1..kn)
//   fold(h, k) = mix64(h ^ (k + 0x9e3779b97f4a7c15 + (h << 6) + (h >> 2)))
//
// Booster streams use the keys (relabeling id) for a relabeling's AdaBoost run
// and (round, candidate) below that. Uniform doubles take the top 53 bits.
// None of this depends on <random> distributions so results are bit-identical
// across standard libraries.

#include <cstdint>
#include <limits>

namespace agboost {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fold_key(std::uint64_t h, std::uint64_t key) noexcept {
  return mix64(h ^ (key + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Keys... keys) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = fold_key(h, static_cast<std::uint64_t>(keys))), ...);
  return h;
}

/// SplitMix64 generator; satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, 1).
  constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r = (*this)();
    while (r >= limit) r = (*this)();
    return r % bound;
  }

  /// Uniformly random label in {-1, +1}.
  constexpr int sign() noexcept { return ((*this)() >> 63) ? 1 : -1; }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace agboost
