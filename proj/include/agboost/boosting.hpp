#pragma once

// Modified AdaBoost (confidence amplification + correlation step) and the
// agnostic booster built on an exhaustive relabeling of the first third of
// the sample.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"
#include "rng.hpp"
#include "weaklearn.hpp"

namespace agboost {

inline constexpr double kCorrClamp = 1e-12;

/// alpha = 1/2 ln((1 + c) / (1 - c)) with c clamped into [-1 + clamp, 1 - clamp].
inline double alpha_from_corr(double c, double clamp = kCorrClamp) {
  detail::require(std::abs(c) <= 1.0 + kProbTol, "alpha_from_corr: |c| must be <= 1");
  if (std::abs(c) >= 1.0 - clamp) return std::copysign(0.5 * std::log((2.0 - clamp) / clamp), c);
  return 0.5 * std::log((1.0 + c) / (1.0 - c));
}

struct AdaBoostConfig {
  std::size_t rounds = 1;
  double delta = 0.1;
  double delta0 = 0.0;
  std::size_t m0 = 1;
  /// One candidate per round, learned from the exact weights.
  bool oracle_mode = false;
  double corr_clamp = kCorrClamp;

  void validate() const {
    detail::require(rounds >= 1, "adaboost: rounds must be >= 1");
    detail::require(delta > 0.0 && delta < 1.0, "adaboost: delta must lie in (0, 1)");
    detail::require(delta0 >= 0.0 && delta0 < 1.0, "adaboost: delta0 must lie in [0, 1)");
    detail::require(m0 >= 1, "adaboost: m0 must be >= 1");
    detail::require(corr_clamp > 0.0 && corr_clamp < 1.0, "adaboost: corr_clamp must lie in (0, 1)");
  }

  /// Candidates per round: ceil(8 / (1 - delta0) * ln(10 e T / delta)), or 1 in oracle mode.
  std::size_t amplification() const {
    if (oracle_mode) return 1;
    const double k = std::ceil(8.0 / (1.0 - delta0) *
                               std::log(10.0 * std::numbers::e * static_cast<double>(rounds) / delta));
    return std::max<std::size_t>(1, static_cast<std::size_t>(k));
  }
};

struct BoostRunReport {
  std::vector<double> corr;   ///< c_t per round
  std::vector<double> alpha;  ///< alpha_t per round (0 on failed rounds)
  std::vector<double> z;      ///< normalizer Z_t per round (1 on failed rounds)
  std::size_t failed_rounds = 0;
  std::size_t amplification = 1;
  /// y_i v(x_i), accumulated during boosting.
  std::vector<double> margins;
  double min_margin = 0.0;
  double max_margin = 0.0;
  /// max over rounds of |sum_i D_t(i) - 1| and min over rounds of min_i D_t(i).
  double max_normalization_error = 0.0;
  double min_weight = 1.0;
};

struct BoostResult {
  VotingClassifier classifier;
  BoostRunReport report;

  /// The vote as a hypothesis; Constant(0) when every round failed.
  Hypothesis hypothesis() const {
    if (classifier.total_weight() == 0.0) return Hypothesis::constant(0.0);
    return Hypothesis::voting(classifier);
  }
};

/// Runs T rounds of the modified AdaBoost on `sample`. Candidate l of round t
/// draws from Rng(derive_seed(stream_seed, t, l)). Rounds with c_t <= 0 are
/// recorded as failed: alpha_t = 0 and the weights are kept.
inline BoostResult modified_adaboost(const Dataset& sample, const WeakLearner& learner, const AdaBoostConfig& cfg,
                                     std::uint64_t stream_seed) {
  cfg.validate();
  detail::require(!sample.empty(), "adaboost: empty dataset");
  if (cfg.oracle_mode)
    detail::require(learner.has_oracle_mode(), "adaboost: oracle mode needs a learner that accepts weights");
  else
    detail::require(static_cast<bool>(learner.learn), "adaboost: weak learner has no sampling procedure");

  const std::size_t m = sample.size();
  const std::size_t k = cfg.amplification();
  std::vector<double> weights(m, 1.0 / static_cast<double>(m));
  std::vector<double> numerator(m, 0.0);
  double alpha_total = 0.0;

  BoostResult out;
  auto& rep = out.report;
  rep.amplification = k;
  rep.corr.reserve(cfg.rounds);
  rep.alpha.reserve(cfg.rounds);
  rep.z.reserve(cfg.rounds);
  rep.min_weight = *std::min_element(weights.begin(), weights.end());

  std::vector<double> evals(m), cand_evals(m);
  auto corr_of = [&](const std::vector<double>& hv) {
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) c += weights[i] * sample.label(i) * hv[i];
    return c;
  };

  for (std::size_t t = 0; t < cfg.rounds; ++t) {
    std::optional<Hypothesis> chosen;
    double c = -std::numeric_limits<double>::infinity();
    if (cfg.oracle_mode) {
      chosen = learner.learn_from_distribution(sample, weights);
      for (std::size_t i = 0; i < m; ++i) evals[i] = (*chosen)(sample.point(i));
      c = corr_of(evals);
    } else {
      for (std::size_t l = 0; l < k; ++l) {
        Rng rng(derive_seed(stream_seed, t, l));
        Hypothesis cand = learner.learn(draw_iid(sample, weights, cfg.m0, rng), rng);
        for (std::size_t i = 0; i < m; ++i) cand_evals[i] = cand(sample.point(i));
        const double cc = corr_of(cand_evals);
        if (cc > c) {
          c = cc;
          chosen = std::move(cand);
          evals.swap(cand_evals);
        }
      }
    }
    rep.corr.push_back(c);
    if (!(c > 0.0)) {
      ++rep.failed_rounds;
      rep.alpha.push_back(0.0);
      rep.z.push_back(1.0);
      continue;
    }
    const double alpha = alpha_from_corr(std::min(c, 1.0), cfg.corr_clamp);
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      weights[i] *= std::exp(-alpha * sample.label(i) * evals[i]);
      z += weights[i];
    }
    double sum = 0.0, lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      weights[i] /= z;
      sum += weights[i];
      lo = std::min(lo, weights[i]);
      numerator[i] += alpha * sample.label(i) * evals[i];
    }
    rep.max_normalization_error = std::max(rep.max_normalization_error, std::abs(sum - 1.0));
    rep.min_weight = std::min(rep.min_weight, lo);
    rep.alpha.push_back(alpha);
    rep.z.push_back(z);
    alpha_total += alpha;
    out.classifier.add(alpha, std::move(*chosen));
  }

  rep.margins.resize(m);
  for (std::size_t i = 0; i < m; ++i) rep.margins[i] = alpha_total > 0.0 ? numerator[i] / alpha_total : 0.0;
  rep.min_margin = *std::min_element(rep.margins.begin(), rep.margins.end());
  rep.max_margin = *std::max_element(rep.margins.begin(), rep.margins.end());
  return out;
}

// ---------------------------------------------------------------------------
// Relabeling enumeration

inline constexpr std::size_t kMaxRelabelingBits = 30;

/// Relabeling with canonical id `id` of k labels: coordinate i is bit
/// (k - 1 - i) of id, 0 -> -1 and 1 -> +1 (lexicographic order).
inline std::vector<int> relabeling(std::size_t k, std::uint64_t id) {
  std::vector<int> y(k);
  for (std::size_t i = 0; i < k; ++i) y[i] = ((id >> (k - 1 - i)) & 1U) ? 1 : -1;
  return y;
}

/// Range over all 2^k sign vectors in canonical order.
class Relabelings {
 public:
  explicit Relabelings(std::size_t k) : k_(k) {
    if (k > kMaxRelabelingBits)
      throw GuardError("relabelings: 2^" + std::to_string(k) + " labelings exceed the 2^30 guard");
  }

  class iterator {
   public:
    using value_type = std::vector<int>;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(std::size_t k, std::uint64_t id) : k_(k), id_(id) {}
    value_type operator*() const { return relabeling(k_, id_); }
    iterator& operator++() {
      ++id_;
      return *this;
    }
    iterator operator++(int) {
      auto tmp = *this;
      ++id_;
      return tmp;
    }
    std::uint64_t id() const noexcept { return id_; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.id_ == b.id_; }

   private:
    std::size_t k_ = 0;
    std::uint64_t id_ = 0;
  };

  iterator begin() const { return {k_, 0}; }
  iterator end() const { return {k_, count()}; }
  std::uint64_t count() const noexcept { return std::uint64_t{1} << k_; }

 private:
  std::size_t k_;
};

inline Relabelings relabelings(std::size_t k) { return Relabelings(k); }

/// {1, 1/2, ..., 2^-r} with r = ceil(log2 sqrt(m)), the smallest r with 4^r >= m.
inline std::vector<double> margin_grid(std::size_t m) {
  detail::require(m >= 1, "margin_grid: m must be >= 1");
  std::size_t r = 0;
  for (unsigned long long p = 1; p < m; p *= 4) ++r;
  std::vector<double> grid(r + 1);
  for (std::size_t i = 0; i <= r; ++i) grid[i] = std::ldexp(1.0, -static_cast<int>(i));
  return grid;
}

/// ceil(32 m ln(e m)).
inline std::size_t default_rounds(std::size_t m) {
  detail::require(m >= 1, "default_rounds: m must be >= 1");
  const double md = static_cast<double>(m);
  return static_cast<std::size_t>(std::ceil(32.0 * md * (1.0 + std::log(md))));
}

// ---------------------------------------------------------------------------
// Agnostic booster

struct AgnosticBoostConfig {
  double delta = 0.1;
  double delta0 = 0.0;
  std::size_t m0 = 1;
  bool oracle_mode = false;
  std::optional<std::size_t> rounds_override;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct SlotAudit {
  double gamma = 1.0;
  std::uint64_t winner = 0;
  double train_loss = 0.0;       ///< L^gamma on the relabeled S1
  double filter_loss = 0.0;      ///< L^gamma on S2
  double validation_loss = 0.0;  ///< L^0 on S3
};

struct AuditTrail {
  std::size_t m_used = 0;  ///< sample length after truncation to a multiple of 3
  std::size_t rounds = 0;
  std::size_t amplification = 1;
  std::uint64_t relabelings = 0;
  std::vector<SlotAudit> slots;
  std::size_t chosen_slot = 0;
  std::uint64_t chosen_id = 0;

  /// Distinct relabeling ids among the slot winners (the bag B2).
  std::vector<std::uint64_t> bag() const {
    std::vector<std::uint64_t> ids;
    for (const auto& s : slots) ids.push_back(s.winner);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }
};

struct AgnosticResult {
  Hypothesis hypothesis;
  AuditTrail audit;
};

namespace detail {

/// Split, grid and per-relabeling AdaBoost settings shared by the streamed
/// booster and its materialized reference.
struct AgnosticPlan {
  Dataset train, filter, validation;
  std::vector<double> grid;
  AdaBoostConfig adaboost;
  std::size_t m_used = 0;
  std::size_t fold = 0;

  std::uint64_t relabeling_count() const { return std::uint64_t{1} << fold; }
  std::uint64_t stream_seed(std::uint64_t master, std::uint64_t id) const { return derive_seed(master, id); }
};

inline AgnosticPlan plan_agnostic(const Dataset& sample, const AgnosticBoostConfig& cfg) {
  const std::size_t m = sample.size() - sample.size() % 3;
  require(m >= 3, "agnostic_boost: need at least 3 examples");
  require(cfg.delta > 0.0 && cfg.delta < 1.0, "agnostic_boost: delta must lie in (0, 1)");
  require(cfg.workers >= 1, "agnostic_boost: workers must be >= 1");
  AgnosticPlan plan;
  plan.m_used = m;
  plan.fold = m / 3;
  if (plan.fold > kMaxRelabelingBits)
    throw GuardError("agnostic_boost: m/3 = " + std::to_string(plan.fold) + " relabeling bits exceed the guard of " +
                     std::to_string(kMaxRelabelingBits));
  plan.train = sample.slice(0, plan.fold);
  plan.filter = sample.slice(plan.fold, 2 * plan.fold);
  plan.validation = sample.slice(2 * plan.fold, m);
  plan.grid = margin_grid(m);
  plan.adaboost.rounds = cfg.rounds_override.value_or(default_rounds(m));
  plan.adaboost.delta = cfg.delta / 10.0;
  plan.adaboost.delta0 = cfg.delta0;
  plan.adaboost.m0 = cfg.m0;
  plan.adaboost.oracle_mode = cfg.oracle_mode;
  plan.adaboost.validate();
  return plan;
}

/// Final pick over the slot winners by S3 error; ties go to the earlier slot
/// (larger margin). Each slot holds one winner, so the relabeling-id order
/// never has to break a remaining tie.
inline std::size_t select_slot(std::span<const std::size_t> validation_errors) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < validation_errors.size(); ++j)
    if (validation_errors[j] < validation_errors[best]) best = j;
  return best;
}

inline Hypothesis as_hypothesis(const std::shared_ptr<const VotingClassifier>& v) {
  if (!v || v->total_weight() == 0.0) return Hypothesis::constant(0.0);
  return Hypothesis::voting(*v);
}

}  // namespace detail

/// Enumerates every relabeling of S1, boosts each one and keeps only the
/// per-slot running minimizers of the S2 margin loss; returns the slot winner
/// with the lowest S3 error. Relabelings are split over cfg.workers threads;
/// the (loss, id) order makes the result independent of the split.
inline AgnosticResult agnostic_boost(const Dataset& sample, const WeakLearner& learner,
                                     const AgnosticBoostConfig& cfg) {
  const auto plan = detail::plan_agnostic(sample, cfg);
  const std::size_t slots = plan.grid.size();

  struct Best {
    std::size_t loss = std::numeric_limits<std::size_t>::max();
    std::uint64_t id = 0;
    std::shared_ptr<const VotingClassifier> classifier;

    bool improves_on(const Best& other) const {
      return loss < other.loss || (loss == other.loss && id < other.id);
    }
  };
  using Slots = std::vector<Best>;

  const std::uint64_t total = plan.relabeling_count();
  const std::size_t workers = static_cast<std::size_t>(std::min<std::uint64_t>(cfg.workers, total));
  std::vector<Slots> partial(workers, Slots(slots));
  std::vector<std::exception_ptr> failures(workers);

  auto work = [&](std::size_t w) {
    try {
      Slots& best = partial[w];
      for (std::uint64_t id = w; id < total; id += workers) {
        const Dataset relabeled = plan.train.relabeled(relabeling(plan.fold, id));
        auto run = modified_adaboost(relabeled, learner, plan.adaboost, plan.stream_seed(cfg.seed, id));
        auto vote = std::make_shared<const VotingClassifier>(std::move(run.classifier));
        const Hypothesis h = detail::as_hypothesis(vote);
        for (std::size_t j = 0; j < slots; ++j) {
          Best cand{margin_violations(h, plan.filter, plan.grid[j]), id, nullptr};
          if (cand.improves_on(best[j])) {
            cand.classifier = vote;
            best[j] = std::move(cand);
          }
        }
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  Slots best = std::move(partial[0]);
  for (std::size_t w = 1; w < workers; ++w)
    for (std::size_t j = 0; j < slots; ++j)
      if (partial[w][j].improves_on(best[j])) best[j] = std::move(partial[w][j]);

  AuditTrail audit;
  audit.m_used = plan.m_used;
  audit.rounds = plan.adaboost.rounds;
  audit.amplification = plan.adaboost.amplification();
  audit.relabelings = total;
  std::vector<std::size_t> validation_errors(slots);
  std::vector<std::uint64_t> ids(slots);
  for (std::size_t j = 0; j < slots; ++j) {
    const Hypothesis h = detail::as_hypothesis(best[j].classifier);
    const Dataset relabeled = plan.train.relabeled(relabeling(plan.fold, best[j].id));
    validation_errors[j] = margin_violations(h, plan.validation, 0.0);
    ids[j] = best[j].id;
    audit.slots.push_back({plan.grid[j], best[j].id, margin_loss(h, relabeled, plan.grid[j]),
                           static_cast<double>(best[j].loss) / static_cast<double>(plan.filter.size()),
                           static_cast<double>(validation_errors[j]) / static_cast<double>(plan.validation.size())});
  }
  audit.chosen_slot = detail::select_slot(validation_errors);
  audit.chosen_id = ids[audit.chosen_slot];
  return {detail::as_hypothesis(best[audit.chosen_slot].classifier), std::move(audit)};
}

}  // namespace agboost
