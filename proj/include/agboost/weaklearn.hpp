#pragma once

// Weak learners: the contract, i.i.d. resampling from boosting weights, the
// Hadamard argmax learner and a threshold stump learner.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "hadamard.hpp"
#include "hardness.hpp"
#include "rng.hpp"

namespace agboost {

/// Advantage gamma, slack eps0, failure probability delta0 and sample size m0.
struct WeakLearnerContract {
  double gamma = 1.0;
  double eps0 = 0.0;
  double delta0 = 0.0;
  std::size_t m0 = 1;

  void validate() const {
    detail::require(gamma > 0.0 && gamma <= 1.0, "weak learner: gamma must lie in (0, 1]");
    detail::require(eps0 >= 0.0 && eps0 <= 1.0, "weak learner: eps0 must lie in [0, 1]");
    detail::require(delta0 >= 0.0 && delta0 < 1.0, "weak learner: delta0 must lie in [0, 1)");
    detail::require(m0 >= 1, "weak learner: m0 must be >= 1");
  }
  bool boostable() const noexcept { return gamma > eps0; }
};

/// Sample-in, hypothesis-out procedure. `learn` gets an explicit RNG stream;
/// `learn_from_distribution` (optional) sees the weights over a dataset
/// directly instead of a resample.
struct WeakLearner {
  using SampleFn = std::function<Hypothesis(const Dataset&, Rng&)>;
  using DistributionFn = std::function<Hypothesis(const Dataset&, std::span<const double>)>;

  WeakLearnerContract contract;
  SampleFn learn;
  DistributionFn learn_from_distribution;

  bool has_oracle_mode() const noexcept { return static_cast<bool>(learn_from_distribution); }
};

/// `count` i.i.d. draws (with replacement) from the categorical distribution
/// `weights` over the examples of `sample`.
inline Dataset draw_iid(const Dataset& sample, std::span<const double> weights, std::size_t count, Rng& rng) {
  detail::require(count >= 1, "draw_iid: count must be >= 1");
  detail::require(weights.size() == sample.size(), "draw_iid: weight vector length does not match dataset");
  std::vector<double> cumulative(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    detail::require(weights[i] >= 0.0, "draw_iid: weights must be non-negative");
    total += weights[i];
    cumulative[i] = total;
  }
  detail::require(total > 0.0, "draw_iid: weight vector has zero mass");
  detail::require(std::abs(total - 1.0) <= kProbTol, "draw_iid: weights do not sum to 1");

  std::vector<std::size_t> points(count);
  std::vector<int> labels(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto i = static_cast<std::size_t>(it - cumulative.begin());
    points[j] = sample.point(i);
    labels[j] = sample.label(i);
  }
  return Dataset(sample.universe_size(), std::move(points), std::move(labels));
}

// ---------------------------------------------------------------------------
// Hadamard argmax learner

/// Score tolerance used to resolve floating-point ties in the base-class
/// argmax; the first candidate within this of the maximum wins.
inline constexpr double kTieTol = 1e-12;

/// Argmax over B of sum_x signed_mass[x] * h(x), solved block by block:
/// each block picks its best signed row, ties to the lowest row, +v first.
inline BaseElement hadamard_best_response(std::span<const double> signed_mass, const BaseClassHandle& handle) {
  detail::require(signed_mass.size() == handle.universe_size(),
                  "hadamard learner: signed mass does not cover the universe [n*s]");
  const std::size_t n = handle.n();
  const auto& H = handle.matrix();
  BaseElement element(handle.s());
  std::vector<double> scores(2 * n);
  for (std::size_t b = 0; b < handle.s(); ++b) {
    const double* block = signed_mass.data() + b * n;
    for (std::size_t r = 0; r < n; ++r) {
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += block[j] * H(r, j);
      scores[2 * r] = dot;
      scores[2 * r + 1] = -dot;
    }
    const double best = *std::max_element(scores.begin(), scores.end());
    std::size_t pick = 0;
    while (scores[pick] < best - kTieTol) ++pick;
    element[b] = SignedRow::from_candidate(pick);
  }
  return element;
}

namespace detail {

inline void check_hadamard_sample(const Dataset& sample, const BaseClassHandle& handle) {
  for (std::size_t x : sample.points())
    if (x >= handle.universe_size())
      throw ValidationError("hadamard learner: point " + std::to_string(x) + " outside universe [n*s] of size " +
                            std::to_string(handle.universe_size()));
}

}  // namespace detail

/// Empirical-correlation maximizer over the (2n)^s base class. Runs in
/// O(s * 2n * n + |S|) without materializing the class.
inline Hypothesis hadamard_argmax_learn(const Dataset& sample, const BaseClassHandle& handle) {
  detail::check_hadamard_sample(sample, handle);
  // Integer label counts keep ties exact.
  std::vector<double> counts(handle.universe_size(), 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) counts[sample.point(i)] += sample.label(i);
  return Hypothesis::hadamard(handle, hadamard_best_response(counts, handle));
}

/// Weighted-correlation maximizer; with exact weights the result satisfies
/// Corr_w(h) >= sup_f Corr_w(f) / sqrt(n).
inline Hypothesis hadamard_oracle_learn(const Dataset& sample, std::span<const double> weights,
                                        const BaseClassHandle& handle) {
  detail::check_hadamard_sample(sample, handle);
  detail::check_weights(weights, sample.size(), "hadamard_oracle_learn");
  std::vector<double> mass(handle.universe_size(), 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) mass[sample.point(i)] += weights[i] * sample.label(i);
  return Hypothesis::hadamard(handle, hadamard_best_response(mass, handle));
}

/// Correlation maximizer over B for an exact distribution on [n*s] x {-1, +1}.
inline Hypothesis hadamard_distribution_argmax(const DiscreteDistribution& dist, const BaseClassHandle& handle) {
  detail::require(dist.universe_size() == handle.universe_size(),
                  "hadamard learner: distribution universe does not match [n*s]");
  std::vector<double> mass(dist.universe_size());
  for (std::size_t x = 0; x < mass.size(); ++x) mass[x] = dist.signed_mass(x);
  return Hypothesis::hadamard(handle, hadamard_best_response(mass, handle));
}

// ---------------------------------------------------------------------------
// Stump learner

namespace detail {

inline Hypothesis best_stump(std::span<const double> mass, std::size_t universe_size) {
  double total = 0.0;
  for (double v : mass) total += v;
  // Threshold k - 1/2 for k = 0..N; h(x) = sigma * (x >= k ? +1 : -1).
  double below = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  int best_sigma = 1;
  for (std::size_t k = 0; k <= universe_size; ++k) {
    if (k > 0) below += mass[k - 1];
    const double score = total - 2.0 * below;
    if (score > best + kTieTol) best = score, best_k = k, best_sigma = 1;
    if (-score > best + kTieTol) best = -score, best_k = k, best_sigma = -1;
  }
  std::vector<double> table(universe_size);
  for (std::size_t x = 0; x < universe_size; ++x) table[x] = best_sigma * (x >= best_k ? 1.0 : -1.0);
  return Hypothesis::table(std::move(table));
}

}  // namespace detail

/// Best x -> sigma * sign(x - theta) over theta in {-1/2, 1/2, ..., N - 1/2};
/// ties go to the smallest theta, then sigma = +1.
inline Hypothesis stump_learn(const Dataset& sample) {
  detail::require(!sample.empty(), "stump_learn: empty dataset");
  std::vector<double> counts(sample.universe_size(), 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) counts[sample.point(i)] += sample.label(i);
  return detail::best_stump(counts, sample.universe_size());
}

inline Hypothesis stump_learn_weighted(const Dataset& sample, std::span<const double> weights) {
  detail::require(!sample.empty(), "stump_learn: empty dataset");
  detail::check_weights(weights, sample.size(), "stump_learn");
  std::vector<double> mass(sample.universe_size(), 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) mass[sample.point(i)] += weights[i] * sample.label(i);
  return detail::best_stump(mass, sample.universe_size());
}

// ---------------------------------------------------------------------------
// Factories

/// Hadamard learner with contract (1/sqrt(n), eps0, delta0, m0). When eps0 > 0
/// and m0 is zero, m0 defaults to ceil(8 ln(2|B|/delta0) / eps0^2).
inline WeakLearner make_hadamard_learner(const BaseClassHandle& handle, double eps0 = 0.0, double delta0 = 0.0,
                                         std::size_t m0 = 0) {
  WeakLearnerContract contract;
  contract.gamma = 1.0 / std::sqrt(static_cast<double>(handle.n()));
  contract.eps0 = eps0;
  contract.delta0 = delta0;
  if (m0 == 0) m0 = (eps0 > 0.0 && delta0 > 0.0) ? hoeffding_m0(handle.size(), delta0, eps0) : 1;
  contract.m0 = m0;
  contract.validate();
  return WeakLearner{contract, [handle](const Dataset& s, Rng&) { return hadamard_argmax_learn(s, handle); },
                     [handle](const Dataset& s, std::span<const double> w) {
                       return hadamard_oracle_learn(s, w, handle);
                     }};
}

inline WeakLearner make_stump_learner(WeakLearnerContract contract = {}) {
  contract.validate();
  return WeakLearner{contract, [](const Dataset& s, Rng&) { return stump_learn(s); },
                     [](const Dataset& s, std::span<const double> w) { return stump_learn_weighted(s, w); }};
}

}  // namespace agboost
