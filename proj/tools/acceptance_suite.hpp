#pragma once

// Desk-scale acceptance checks. Each criterion reports one PASS/FAIL line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "agboost/agboost.hpp"
#include "agboost/harness.hpp"

namespace agboost::acceptance {

struct Options {
  std::uint64_t seed = 20240601;
  std::size_t workers = 1;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline DiscreteDistribution random_distribution(std::size_t n, Rng& rng) {
  std::vector<double> pos(n), neg(n);
  for (std::size_t x = 0; x < n; ++x) {
    pos[x] = rng.below(5) == 0 ? 0.0 : rng.uniform();
    neg[x] = rng.below(5) == 0 ? 0.0 : rng.uniform();
  }
  pos[0] += 1e-3;
  return DiscreteDistribution::normalized(std::move(pos), std::move(neg));
}

inline Dataset random_dataset(std::size_t universe, std::size_t m, Rng& rng) {
  std::vector<std::size_t> pts(m);
  std::vector<int> ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    pts[i] = rng.below(universe);
    ys[i] = rng.sign();
  }
  return Dataset(universe, std::move(pts), std::move(ys));
}

inline std::vector<int> random_signs(std::size_t n, Rng& rng) {
  std::vector<int> out(n);
  for (auto& v : out) v = rng.sign();
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace detail

inline Outcome margin_guarantee(const Options& opt) {
  const auto handle = base_class(4, 2);
  const auto learner = make_hadamard_learner(handle);
  AdaBoostConfig cfg;
  cfg.oracle_mode = true;
  cfg.rounds = static_cast<std::size_t>(std::ceil(32.0 * std::log(8.0 * std::numbers::e) / 0.25));
  Rng rng(derive_seed(opt.seed, 1));
  const std::vector<std::size_t> pts{0, 1, 2, 3, 4, 5, 6, 7};
  double worst = INFINITY;
  bool ok = true;
  for (int run = 0; run < 10; ++run) {
    const Dataset s(8, pts, detail::random_signs(8, rng));
    const auto res = modified_adaboost(s, learner, cfg, 0);
    worst = std::min(worst, res.report.min_margin);
    ok = ok && res.report.min_margin > 1.0 / 16.0;
  }
  return {ok, "T=" + std::to_string(cfg.rounds) + ", min margin " + detail::fmt("%.6f", worst) + " vs 1/16"};
}

inline Outcome hadamard_guarantee(const Options& opt) {
  const auto handle = base_class(4, 2);
  Rng rng(derive_seed(opt.seed, 2));
  std::size_t held = 0, sup_ok = 0, enum_ok = 0;
  for (int i = 0; i < 200; ++i) {
    const auto dist = detail::random_distribution(8, rng);
    const double sup = best_table_correlation(dist);
    const auto h = hadamard_distribution_argmax(dist, handle);
    held += correlation(h, dist) >= 0.5 * sup - 1e-12;
    const double enumerated_sup = 1.0 - 2.0 * oracle::erm_all_functions(dist).error;
    sup_ok += std::abs(enumerated_sup - sup) <= 1e-12;
    enum_ok += evaluate_all(oracle::exhaustive_base_argmax(dist, handle), 8) == evaluate_all(h, 8);
  }
  return {held == 200 && sup_ok == 200 && enum_ok == 200,
          std::to_string(held) + "/200 guarantee, " + std::to_string(sup_ok) + "/200 sup agree, " +
              std::to_string(enum_ok) + "/200 argmax agree"};
}

inline Outcome hard_instance_identities(const Options& opt) {
  Rng rng(derive_seed(opt.seed, 3));
  bool ok = true;
  double worst = 0.0;
  for (auto [d, L] : std::vector<std::pair<std::size_t, double>>{{5, 0.2}, {8, 0.1}}) {
    const auto m = min_admissible_m(d, L);
    const auto inst = hard_instance(d, L, static_cast<double>(m), std::nullopt, rng);
    ok = ok && std::abs(inst.distribution.total_mass() - 1.0) <= 1e-12;
    ok = ok && std::abs(error_binary(inst.f_b, inst.distribution) - L) <= 1e-12;
    const auto bayes = bayes_error(inst.distribution);
    ok = ok && std::abs(bayes.error - L) <= 1e-12 && evaluate_all(bayes.witness, d) == evaluate_all(inst.f_b, d);
    for (int t = 0; t < 100; ++t) {
      auto table = detail::random_signs(d, rng);
      table[d - 1] = 1;
      std::size_t hamming = 0;
      for (std::size_t x = 0; x + 1 < d; ++x) hamming += table[x] != inst.b[x];
      const double excess = error_binary(Hypothesis::table(std::span<const int>(table)), inst.distribution) - L;
      const double gap = std::abs(excess - 2.0 * inst.p * inst.c * static_cast<double>(hamming));
      worst = std::max(worst, gap);
    }
  }
  ok = ok && worst <= 1e-12;
  return {ok, "m in {278, 500}, max identity gap " + detail::fmt("%.3g", worst)};
}

inline Outcome streamed_equals_naive(const Options& opt) {
  const auto handle = base_class(4, 2);
  std::size_t agree = 0, total = 0;
  auto compare = [&](const WeakLearner& learner, AgnosticBoostConfig cfg, std::size_t m, Rng& rng) {
    const Dataset s = detail::random_dataset(8, m, rng);
    const auto fast = agnostic_boost(s, learner, cfg);
    const auto slow = oracle::naive_agnostic_boost(s, learner, cfg);
    bool same = fast.audit.slots.size() == slow.audit.slots.size() && fast.audit.chosen_id == slow.audit.chosen_id;
    for (std::size_t j = 0; same && j < fast.audit.slots.size(); ++j)
      same = fast.audit.slots[j].winner == slow.audit.slots[j].winner &&
             fast.audit.slots[j].validation_loss == slow.audit.slots[j].validation_loss;
    same = same && evaluate_all(fast.hypothesis, 8) == evaluate_all(slow.hypothesis, 8);
    agree += same;
    ++total;
  };
  Rng rng(derive_seed(opt.seed, 4));
  const auto exact = make_hadamard_learner(handle);
  const auto sampled = make_hadamard_learner(handle, 0.0, 0.5, 8);
  for (std::size_t m : {3u, 6u, 9u}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      AgnosticBoostConfig cfg;
      cfg.seed = derive_seed(opt.seed, m, seed);
      cfg.oracle_mode = true;
      compare(exact, cfg, m, rng);
      cfg.oracle_mode = false;
      cfg.delta0 = 0.5;
      cfg.m0 = 8;
      cfg.rounds_override = 25;
      compare(sampled, cfg, m, rng);
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) +
                              " runs identical (oracle and sampled learners, m in {3, 6, 9})"};
}

inline Outcome hoeffding_contract(const Options& opt) {
  const auto handle = base_class(4, 2);
  const double delta0 = 0.1, eps0 = 0.2;
  const std::size_t m0 = hoeffding_m0(handle.size(), delta0, eps0);
  // Every point has mass 1/8 and signed mass 0.1 (+, +, +, -) per block: each
  // signed row reaches exactly half of the best table correlation.
  std::vector<double> pos(8), neg(8);
  for (std::size_t x = 0; x < 8; ++x) {
    const double signed_mass = (x % 4 == 3 ? -0.1 : 0.1);
    pos[x] = 0.5 * (0.125 + signed_mass);
    neg[x] = 0.5 * (0.125 - signed_mass);
  }
  const DiscreteDistribution dist(pos, neg);
  const double threshold = 0.5 * best_table_correlation(dist) - eps0;
  Rng rng(derive_seed(opt.seed, 5));
  std::size_t violations = 0;
  const std::size_t trials = 500;
  for (std::size_t t = 0; t < trials; ++t) {
    const Dataset s = harness::sample_from(dist, m0, rng);
    violations += correlation(hadamard_argmax_learn(s, handle), dist) < threshold;
  }
  const double rate = static_cast<double>(violations) / static_cast<double>(trials);
  const double limit = delta0 + 3.0 * std::sqrt(delta0 * (1.0 - delta0) / static_cast<double>(trials));
  return {rate <= limit, "m0=" + std::to_string(m0) + ", violation rate " + detail::fmt("%.4f", rate) +
                             " <= " + detail::fmt("%.4f", limit)};
}

inline Outcome invariant_suite(const Options& opt) {
  Rng rng(derive_seed(opt.seed, 6));
  const auto handle = base_class(4, 2);
  std::vector<std::string> failed;

  double norm_err = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Dataset s = detail::random_dataset(8, 9 + rng.below(20), rng);
    AdaBoostConfig cfg;
    cfg.rounds = 40;
    cfg.delta0 = 0.5;
    cfg.m0 = 6;
    cfg.oracle_mode = t % 2 == 0;
    const auto res = modified_adaboost(s, make_hadamard_learner(handle, 0.0, 0.5, 6), cfg, derive_seed(opt.seed, t));
    norm_err = std::max(norm_err, res.report.max_normalization_error);
    if (res.report.min_weight < 0.0) failed.push_back("negative weight");
  }
  if (norm_err > 1e-9) failed.push_back("normalization");

  for (int t = 0; t < 100; ++t) {
    const auto dist = detail::random_distribution(8, rng);
    const auto h = Hypothesis::table(std::span<const int>(detail::random_signs(8, rng)));
    if (std::abs(correlation(h, dist) - (1.0 - 2.0 * error_binary(h, dist))) > 1e-9) {
      failed.push_back("corr = 1 - 2 err");
      break;
    }
  }

  bool monotone = true;
  for (int t = 0; t < 20 && monotone; ++t) {
    const Dataset s = detail::random_dataset(8, 12, rng);
    AdaBoostConfig cfg;
    cfg.rounds = 15;
    cfg.oracle_mode = true;
    const auto v = modified_adaboost(s, make_hadamard_learner(handle), cfg, 0).hypothesis();
    const auto dist = detail::random_distribution(8, rng);
    double prev_s = -1.0, prev_d = -1.0;
    for (double lambda = 0.0; lambda <= 1.0 + 1e-12; lambda += 1.0 / 64.0) {
      const double ls = margin_loss(v, s, lambda), ld = margin_loss(v, dist, lambda);
      monotone = monotone && ls >= prev_s && ld >= prev_d - 1e-12;
      prev_s = ls;
      prev_d = ld;
    }
  }
  if (!monotone) failed.push_back("margin-loss monotonicity");

  for (std::size_t m : {3u, 6u, 9u, 12u, 15u}) {
    AgnosticBoostConfig cfg;
    cfg.oracle_mode = true;
    cfg.seed = derive_seed(opt.seed, m);
    const auto res = agnostic_boost(detail::random_dataset(8, m, rng), make_hadamard_learner(handle), cfg);
    if (res.audit.bag().size() > static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(m)))) + 1)
      failed.push_back("|B2| bound at m=" + std::to_string(m));
  }

  {
    const Dataset s = detail::random_dataset(8, 12, rng);
    AgnosticBoostConfig cfg;
    cfg.delta0 = 0.5;
    cfg.m0 = 6;
    cfg.rounds_override = 10;
    cfg.seed = opt.seed;
    const auto learner = make_hadamard_learner(handle, 0.0, 0.5, 6);
    const auto base = agnostic_boost(s, learner, cfg);
    for (std::size_t w : {2u, 8u}) {
      cfg.workers = w;
      const auto par = agnostic_boost(s, learner, cfg);
      if (par.audit.chosen_id != base.audit.chosen_id ||
          detail::max_abs_diff(evaluate_all(par.hypothesis, 8), evaluate_all(base.hypothesis, 8)) != 0.0)
        failed.push_back("agnostic_boost workers=" + std::to_string(w));
    }
    harness::json doc{{"scenario", "noisy-table"},
                      {"instance", {{"N", 8}, {"n", 4}, {"s", 2}, {"eta", 0.2}}},
                      {"weak_learner", {{"type", "hadamard-oracle"}}},
                      {"rounds", 30},
                      {"m", {6, 9}},
                      {"trials", 4},
                      {"seed", opt.seed}};
    auto ecfg = harness::parse_config(doc);
    std::string reference;
    for (std::size_t w : {1u, 2u, 8u}) {
      ecfg.workers = w;
      std::ostringstream out;
      harness::write_csv(harness::run_experiment(ecfg), out);
      if (w == 1) reference = out.str();
      else if (out.str() != reference) failed.push_back("run_experiment workers=" + std::to_string(w));
    }
  }

  std::string summary = failed.empty() ? "normalization error " + detail::fmt("%.2g", norm_err) + "; all invariants hold"
                                       : "failed:";
  for (const auto& f : failed) summary += " " + f + ";";
  return {failed.empty(), summary};
}

inline Outcome noisy_table_smoke(const Options& opt) {
  harness::json doc{{"scenario", "noisy-table"},
                    {"instance", {{"N", 8}, {"n", 4}, {"s", 2}, {"eta", 0.2}}},
                    {"algorithm", "agnostic_boost"},
                    {"weak_learner", {{"type", "hadamard-oracle"}}},
                    {"m", {9, 18, 27}},
                    {"trials", 20},
                    {"seed", opt.seed},
                    {"workers", opt.workers}};
  const auto boost = harness::summarize(harness::run_experiment(harness::parse_config(doc)));
  doc["algorithm"] = "erm";
  doc["m"] = {27};
  const auto erm = harness::summarize(harness::run_experiment(harness::parse_config(doc)));

  if (boost.size() != 3 || erm.size() != 1) return {false, "unexpected summary shape"};
  bool trend = true;
  std::string summary = "mean excess";
  for (std::size_t i = 0; i < boost.size(); ++i) {
    summary += " m=" + std::to_string(boost[i].m) + ":" + detail::fmt("%.4f", boost[i].mean_excess);
    if (i > 0) {
      const double se_prev = boost[i - 1].std_excess / std::sqrt(static_cast<double>(boost[i - 1].count));
      const double se = boost[i].std_excess / std::sqrt(static_cast<double>(boost[i].count));
      trend = trend && boost[i].mean_excess <= boost[i - 1].mean_excess + 2.0 * std::hypot(se_prev, se);
    }
  }
  const double gap = std::abs(boost.back().mean_excess - erm[0].mean_excess);
  summary += std::string(trend ? " (non-increasing at 2 sigma)" : " (increase beyond 2 sigma)") + "; ERM m=27:" +
             detail::fmt("%.4f", erm[0].mean_excess) + ", gap " + detail::fmt("%.4f", gap) +
             (gap <= 0.15 ? " <= 0.15" : " > 0.15");
  const bool ok = trend && gap <= 0.15;
  return {ok, summary};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome(const Options&)> check;
};

inline std::vector<Criterion> criteria() {
  return {{1, "boosting-margin", 10.0, margin_guarantee},
          {2, "hadamard-weak-learner", 5.0, hadamard_guarantee},
          {3, "hard-instance-identities", 10.0, hard_instance_identities},
          {4, "streamed-equals-naive", 120.0, streamed_equals_naive},
          {5, "hoeffding-m0-contract", 30.0, hoeffding_contract},
          {6, "invariants", 60.0, invariant_suite},
          {7, "noisy-table-smoke", 900.0, noisy_table_smoke}};
}

/// Runs every criterion, printing one line each. A criterion fails when its
/// check fails, throws, or exceeds its time budget.
inline std::vector<CriterionResult> run_all(const Options& opt, std::ostream& out) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    CriterionResult r{c.id, c.name, false, "", 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto o = c.check(opt);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > c.budget_seconds) {
      r.pass = false;
      r.detail += "; over the " + detail::fmt("%.0f", c.budget_seconds) + " s budget";
    }
    out << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " ("
        << detail::fmt("%.2f", r.seconds) << " s)" << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace agboost::acceptance
