#pragma once

// Brute-force references for the fast paths. Everything here enumerates and
// is guarded by a SizeGuard.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "boosting.hpp"
#include "core.hpp"
#include "hadamard.hpp"
#include "weaklearn.hpp"

namespace agboost::oracle {

struct SizeGuard {
  std::uint64_t max_enumeration = std::uint64_t{1} << 20;

  void check(double count, const std::string& what) const {
    if (count > static_cast<double>(max_enumeration))
      throw GuardError(what + ": enumerating " + std::to_string(count) + " items exceeds the guard of " +
                       std::to_string(max_enumeration));
  }
};

struct ErmResult {
  Hypothesis table;
  double error = 0.0;
};

namespace detail {

/// Table with index bit x giving f(x): 0 -> +1, 1 -> -1. The first minimizer
/// in index order therefore labels ties +1.
inline std::vector<double> table_from_index(std::uint64_t index, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t x = 0; x < n; ++x) t[x] = ((index >> x) & 1U) ? -1.0 : 1.0;
  return t;
}

template <typename Cost>
std::uint64_t first_minimizer(std::size_t n, std::span<const Cost> cost_pos, std::span<const Cost> cost_neg,
                              Cost& best_cost) {
  const std::uint64_t count = std::uint64_t{1} << n;
  std::uint64_t best = 0;
  best_cost = std::numeric_limits<Cost>::max();
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Cost c = 0;
    for (std::size_t x = 0; x < n; ++x) c += ((idx >> x) & 1U) ? cost_neg[x] : cost_pos[x];
    if (c < best_cost) best_cost = c, best = idx;
  }
  return best;
}

}  // namespace detail

/// Exhaustive empirical risk minimization over all 2^N binary tables.
inline ErmResult erm_all_functions(const Dataset& sample, const SizeGuard& guard = {}) {
  agboost::detail::require(!sample.empty(), "erm_all_functions: empty dataset");
  const std::size_t n = sample.universe_size();
  agboost::detail::require(n <= 20, "erm_all_functions: universe larger than 20 points");
  guard.check(std::ldexp(1.0, static_cast<int>(n)), "erm_all_functions");
  // Cost of labeling x with +1 is the number of negatives at x, and vice versa.
  std::vector<long long> cost_pos(n, 0), cost_neg(n, 0);
  for (std::size_t i = 0; i < sample.size(); ++i) (sample.label(i) > 0 ? cost_neg : cost_pos)[sample.point(i)]++;
  long long best = 0;
  const auto idx = detail::first_minimizer<long long>(n, cost_pos, cost_neg, best);
  return {Hypothesis::table(detail::table_from_index(idx, n)),
          static_cast<double>(best) / static_cast<double>(sample.size())};
}

inline ErmResult erm_all_functions(const DiscreteDistribution& dist, const SizeGuard& guard = {}) {
  const std::size_t n = dist.universe_size();
  agboost::detail::require(n <= 20, "erm_all_functions: universe larger than 20 points");
  guard.check(std::ldexp(1.0, static_cast<int>(n)), "erm_all_functions");
  std::vector<double> cost_pos(n), cost_neg(n);
  for (std::size_t x = 0; x < n; ++x) {
    cost_pos[x] = dist.mass(x, -1);
    cost_neg[x] = dist.mass(x, 1);
  }
  double best = 0.0;
  const auto idx = detail::first_minimizer<double>(n, cost_pos, cost_neg, best);
  return {Hypothesis::table(detail::table_from_index(idx, n)), best};
}

/// Misclassification mass of sign(h), summed cell by cell.
inline double audit_error(const Hypothesis& h, const DiscreteDistribution& dist) {
  double err = 0.0;
  for (std::size_t x = 0; x < dist.universe_size(); ++x) {
    const int label = sign_pm(h(x));
    for (int y : {-1, 1})
      if (y != label) err += dist.mass(x, y);
  }
  return err;
}

// ---------------------------------------------------------------------------
// Base-class enumeration

/// Global argmax over all (2n)^s elements of sum_x signed_mass[x] h(x), in the
/// same order as the blockwise learner (block 0 most significant).
inline Hypothesis exhaustive_base_argmax(std::span<const double> signed_mass, const BaseClassHandle& handle,
                                         const SizeGuard& guard = {}) {
  agboost::detail::require(signed_mass.size() == handle.universe_size(),
                           "exhaustive_base_argmax: mass does not cover [n*s]");
  guard.check(handle.size(), "exhaustive_base_argmax");
  const auto count = static_cast<std::uint64_t>(handle.size());
  std::vector<double> scores(count);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const BaseElement e = handle.element_at(idx);
    double s = 0.0;
    for (std::size_t x = 0; x < signed_mass.size(); ++x) s += signed_mass[x] * handle.eval(e, x);
    scores[idx] = s;
    best = std::max(best, s);
  }
  std::uint64_t pick = 0;
  while (scores[pick] < best - kTieTol) ++pick;
  return Hypothesis::hadamard(handle, handle.element_at(pick));
}

inline Hypothesis exhaustive_base_argmax(const Dataset& sample, const BaseClassHandle& handle,
                                         const SizeGuard& guard = {}) {
  std::vector<double> counts(handle.universe_size(), 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    agboost::detail::require(sample.point(i) < handle.universe_size(), "exhaustive_base_argmax: point out of universe");
    counts[sample.point(i)] += sample.label(i);
  }
  return exhaustive_base_argmax(counts, handle, guard);
}

inline Hypothesis exhaustive_base_argmax(const Dataset& sample, std::span<const double> weights,
                                         const BaseClassHandle& handle, const SizeGuard& guard = {}) {
  agboost::detail::require(weights.size() == sample.size(), "exhaustive_base_argmax: weight length mismatch");
  std::vector<double> mass(handle.universe_size(), 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    agboost::detail::require(sample.point(i) < handle.universe_size(), "exhaustive_base_argmax: point out of universe");
    mass[sample.point(i)] += weights[i] * sample.label(i);
  }
  return exhaustive_base_argmax(mass, handle, guard);
}

inline Hypothesis exhaustive_base_argmax(const DiscreteDistribution& dist, const BaseClassHandle& handle,
                                         const SizeGuard& guard = {}) {
  std::vector<double> mass(dist.universe_size());
  for (std::size_t x = 0; x < mass.size(); ++x) mass[x] = dist.signed_mass(x);
  return exhaustive_base_argmax(mass, handle, guard);
}

// ---------------------------------------------------------------------------
// Materialized agnostic booster

struct LossRow {
  std::uint64_t id = 0;
  std::vector<std::size_t> filter_violations;  ///< per grid slot, on S2
  std::size_t validation_violations = 0;       ///< L^0 count on S3
};

struct NaiveResult {
  Hypothesis hypothesis;
  AuditTrail audit;
  std::vector<LossRow> losses;  ///< one row per relabeling, in id order
};

/// Reference semantics: builds every voting classifier of the bag B1 with the
/// same RNG streams as agnostic_boost, then filters and validates.
inline NaiveResult naive_agnostic_boost(const Dataset& sample, const WeakLearner& learner,
                                        const AgnosticBoostConfig& cfg) {
  const auto plan = agboost::detail::plan_agnostic(sample, cfg);
  if (plan.fold > 10)
    throw GuardError("naive_agnostic_boost: m/3 = " + std::to_string(plan.fold) + " exceeds the limit of 10");

  std::vector<std::shared_ptr<const VotingClassifier>> bag;
  std::vector<LossRow> table;
  for (std::uint64_t id = 0; id < plan.relabeling_count(); ++id) {
    const Dataset relabeled = plan.train.relabeled(relabeling(plan.fold, id));
    auto run = modified_adaboost(relabeled, learner, plan.adaboost, plan.stream_seed(cfg.seed, id));
    bag.push_back(std::make_shared<const VotingClassifier>(std::move(run.classifier)));
  }
  for (std::uint64_t id = 0; id < bag.size(); ++id) {
    const Hypothesis h = agboost::detail::as_hypothesis(bag[id]);
    LossRow row{id, {}, margin_violations(h, plan.validation, 0.0)};
    for (double g : plan.grid) row.filter_violations.push_back(margin_violations(h, plan.filter, g));
    table.push_back(std::move(row));
  }

  AuditTrail audit;
  audit.m_used = plan.m_used;
  audit.rounds = plan.adaboost.rounds;
  audit.amplification = plan.adaboost.amplification();
  audit.relabelings = bag.size();
  std::vector<std::size_t> validation_errors;
  for (std::size_t j = 0; j < plan.grid.size(); ++j) {
    std::size_t winner = 0;
    for (std::size_t r = 1; r < table.size(); ++r)
      if (table[r].filter_violations[j] < table[winner].filter_violations[j]) winner = r;
    const Hypothesis h = agboost::detail::as_hypothesis(bag[winner]);
    const Dataset relabeled = plan.train.relabeled(relabeling(plan.fold, winner));
    validation_errors.push_back(table[winner].validation_violations);
    audit.slots.push_back(
        {plan.grid[j], winner, margin_loss(h, relabeled, plan.grid[j]),
         static_cast<double>(table[winner].filter_violations[j]) / static_cast<double>(plan.filter.size()),
         static_cast<double>(table[winner].validation_violations) / static_cast<double>(plan.validation.size())});
  }
  audit.chosen_slot = agboost::detail::select_slot(validation_errors);
  audit.chosen_id = audit.slots[audit.chosen_slot].winner;
  return {agboost::detail::as_hypothesis(bag[audit.chosen_id]), std::move(audit), std::move(table)};
}

}  // namespace agboost::oracle
