#pragma once

// Lower-bound constructions: the Hadamard base class, weak-learner sample
// sizes and the hard distributions D_b.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "core.hpp"
#include "hadamard.hpp"
#include "rng.hpp"

namespace agboost {

/// ceil(8 d ln(4 / (delta0 gamma^2)) / eps0^2).
inline std::size_t weak_learner_m0(double d, double gamma, double delta0, double eps0) {
  detail::require(d > 0.0, "weak_learner_m0: d must be positive");
  detail::require(gamma > 0.0 && gamma <= 1.0, "weak_learner_m0: gamma must lie in (0, 1]");
  detail::require(delta0 > 0.0 && delta0 <= 1.0, "weak_learner_m0: delta0 must lie in (0, 1]");
  detail::require(eps0 > 0.0 && eps0 <= 1.0, "weak_learner_m0: eps0 must lie in (0, 1]");
  return static_cast<std::size_t>(std::ceil(8.0 * d * std::log(4.0 / (delta0 * gamma * gamma)) / (eps0 * eps0)));
}

/// ceil(8 ln(2 |B| / delta0) / eps0^2): the union-bound sample size that makes
/// every empirical correlation over a finite class eps0/2-accurate.
inline std::size_t hoeffding_m0(double class_size, double delta0, double eps0) {
  detail::require(class_size >= 1.0, "hoeffding_m0: class size must be >= 1");
  detail::require(delta0 > 0.0 && delta0 <= 1.0, "hoeffding_m0: delta0 must lie in (0, 1]");
  detail::require(eps0 > 0.0 && eps0 <= 1.0, "hoeffding_m0: eps0 must lie in (0, 1]");
  return static_cast<std::size_t>(std::ceil(8.0 * std::log(2.0 * class_size / delta0) / (eps0 * eps0)));
}

/// Hard distribution over [d] x {-1, +1}. Points 0..d-2 carry mass p each, with
/// label b_x at rate 1/2 + c; the anchor point d-1 has mass 1 - (d-1)p and
/// label +1.
struct HardInstance {
  std::size_t d = 0;
  double L = 0.0;
  double m = 0.0;
  double c = 0.0;
  double p = 0.0;
  std::vector<int> b;  ///< length d; b[d-1] is the anchor label, always +1
  DiscreteDistribution distribution;
  Hypothesis f_b;

  std::size_t anchor() const noexcept { return d - 1; }
};

/// Smallest integer m with m >= d / (L (1/2 - L)^2).
inline std::size_t min_admissible_m(std::size_t d, double L) {
  const double q = L * (0.5 - L) * (0.5 - L);
  auto m = static_cast<std::size_t>(std::ceil(static_cast<double>(d) / q));
  while (m > 1 && static_cast<double>(m - 1) * q >= static_cast<double>(d)) --m;
  while (static_cast<double>(m) * q < static_cast<double>(d)) ++m;
  return m;
}

inline HardInstance hard_instance(std::size_t d, double L, double m, std::optional<std::vector<int>> b,
                                  Rng& rng) {
  detail::require(d >= 2, "hard_instance: d must be >= 2");
  detail::require(L > 0.0 && L < 0.5, "hard_instance: L must lie in (0, 1/2)");
  const double q = L * (0.5 - L) * (0.5 - L);
  detail::require(m * q >= static_cast<double>(d) * (1.0 - 1e-12),
                  "hard_instance: m must satisfy m >= d / (L (1/2 - L)^2)");

  std::vector<int> signs;
  if (b) {
    detail::require(b->size() == d || b->size() == d - 1, "hard_instance: b must have length d or d - 1");
    signs.assign(b->begin(), b->begin() + static_cast<std::ptrdiff_t>(d - 1));
    for (int s : signs) detail::require(s == 1 || s == -1, "hard_instance: b entries must be +1 or -1");
  } else {
    signs.resize(d - 1);
    for (auto& s : signs) s = rng.sign();
  }
  signs.push_back(1);

  const double c = std::sqrt(static_cast<double>(d) / (64.0 * m * L));
  const double p = L / (static_cast<double>(d - 1) * (0.5 - c));
  if (!(p * static_cast<double>(d - 1) < 1.0))
    throw ValidationError("hard_instance: parameter regime violated, p (d - 1) >= 1");

  std::vector<double> pos(d), neg(d);
  for (std::size_t x = 0; x + 1 < d; ++x) {
    const double agree = (0.5 + c) * p;
    const double disagree = (0.5 - c) * p;
    pos[x] = signs[x] > 0 ? agree : disagree;
    neg[x] = signs[x] > 0 ? disagree : agree;
  }
  pos[d - 1] = 1.0 - static_cast<double>(d - 1) * p;
  neg[d - 1] = 0.0;

  std::vector<double> table(signs.begin(), signs.end());
  return HardInstance{d,
                      L,
                      m,
                      c,
                      p,
                      std::move(signs),
                      DiscreteDistribution(std::move(pos), std::move(neg)),
                      Hypothesis::table(std::move(table))};
}

}  // namespace agboost
