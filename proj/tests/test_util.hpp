#pragma once

// Random generators shared by the property tests.

#include <cstddef>
#include <vector>

#include "agboost/core.hpp"
#include "agboost/rng.hpp"

namespace testutil {

inline std::vector<int> random_signs(std::size_t n, agboost::Rng& rng) {
  std::vector<int> out(n);
  for (auto& v : out) v = rng.sign();
  return out;
}

/// Random table over [n] x {-1, +1}; about one cell in five is exactly zero.
inline agboost::DiscreteDistribution random_distribution(std::size_t n, agboost::Rng& rng) {
  std::vector<double> pos(n), neg(n);
  for (std::size_t x = 0; x < n; ++x) {
    pos[x] = rng.below(5) == 0 ? 0.0 : rng.uniform();
    neg[x] = rng.below(5) == 0 ? 0.0 : rng.uniform();
  }
  pos[0] += 1e-3;
  return agboost::DiscreteDistribution::normalized(std::move(pos), std::move(neg));
}

inline agboost::Dataset random_dataset(std::size_t universe, std::size_t m, agboost::Rng& rng) {
  std::vector<std::size_t> pts(m);
  std::vector<int> ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    pts[i] = rng.below(universe);
    ys[i] = rng.sign();
  }
  return agboost::Dataset(universe, std::move(pts), std::move(ys));
}

/// Normalized random weights, occasionally with zero entries.
inline std::vector<double> random_weights(std::size_t m, agboost::Rng& rng) {
  std::vector<double> w(m);
  double total = 0.0;
  for (auto& v : w) total += (v = rng.below(6) == 0 ? 0.0 : rng.uniform());
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace testutil
