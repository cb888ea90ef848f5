#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "agboost/oracle.hpp"
#include "test_util.hpp"

using namespace agboost;

TEST(ErmAllFunctions, NoiselessDistributionHasZeroError) {
  const std::vector<double> pos{0.25, 0.0, 0.25, 0.0}, neg{0.0, 0.25, 0.0, 0.25};
  const auto res = oracle::erm_all_functions(DiscreteDistribution(pos, neg));
  EXPECT_DOUBLE_EQ(res.error, 0.0);
  EXPECT_EQ(evaluate_all(res.table, 4), (std::vector<double>{1, -1, 1, -1}));
}

TEST(ErmAllFunctions, MatchesBayesErrorOnRandomTables) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto dist = testutil::random_distribution(8, rng);
    const auto erm = oracle::erm_all_functions(dist);
    const auto bayes = bayes_error(dist);
    EXPECT_NEAR(erm.error, bayes.error, 1e-12);
    EXPECT_EQ(evaluate_all(erm.table, 8), evaluate_all(bayes.witness, 8));
  }
}

TEST(ErmAllFunctions, SampleGivesPointwiseMajority) {
  // x=0: +,+,-   x=1: -   x=2: +,-   x=3: -,-,+   x=4: unseen
  const Dataset s(5, {0, 0, 0, 1, 2, 2, 3, 3, 3}, {1, 1, -1, -1, 1, -1, -1, -1, 1});
  const auto res = oracle::erm_all_functions(s);
  EXPECT_EQ(evaluate_all(res.table, 5), (std::vector<double>{1, -1, 1, -1, 1}));
  EXPECT_DOUBLE_EQ(res.error, 3.0 / 9.0);
}

TEST(ErmAllFunctions, Guards) {
  EXPECT_THROW(oracle::erm_all_functions(Dataset(21, {0}, {1})), ValidationError);
  oracle::SizeGuard tight{16};
  EXPECT_THROW(oracle::erm_all_functions(Dataset(5, {0}, {1}), tight), GuardError);
}

TEST(AuditError, AgreesWithErrorBinary) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto dist = testutil::random_distribution(6, rng);
    const auto h = Hypothesis::table(testutil::random_signs(6, rng));
    EXPECT_NEAR(oracle::audit_error(h, dist), error_binary(h, dist), 1e-12);
  }
}

TEST(ExhaustiveBaseArgmax, MatchesBlockwiseForTwoByOne) {
  const auto b = base_class(2, 1);
  Rng rng(50);
  for (int i = 0; i < 50; ++i) {
    const Dataset s = testutil::random_dataset(2, 1 + rng.below(9), rng);
    EXPECT_EQ(evaluate_all(oracle::exhaustive_base_argmax(s, b), 2), evaluate_all(hadamard_argmax_learn(s, b), 2));
  }
}

TEST(ExhaustiveBaseArgmax, MatchesBlockwiseWeightedAndOnDistributions) {
  for (auto [n, s] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {4, 2}, {8, 1}}) {
    const auto b = base_class(n, s);
    Rng rng(n * 10 + s);
    for (int i = 0; i < 30; ++i) {
      const Dataset sample = testutil::random_dataset(n * s, 12, rng);
      const auto w = testutil::random_weights(12, rng);
      EXPECT_EQ(evaluate_all(oracle::exhaustive_base_argmax(sample, w, b), n * s),
                evaluate_all(hadamard_oracle_learn(sample, w, b), n * s));
      const auto dist = testutil::random_distribution(n * s, rng);
      EXPECT_EQ(evaluate_all(oracle::exhaustive_base_argmax(dist, b), n * s),
                evaluate_all(hadamard_distribution_argmax(dist, b), n * s));
    }
  }
}

TEST(ExhaustiveBaseArgmax, RealizableSampleHasUnitCorrelation) {
  const auto b = base_class(4, 2);
  const auto target = Hypothesis::hadamard(b, b.element_at(45));
  std::vector<std::size_t> pts{0, 1, 2, 3, 4, 5, 6, 7, 3, 5};
  std::vector<int> ys;
  for (auto x : pts) ys.push_back(static_cast<int>(target(x)));
  const Dataset s(8, pts, ys);
  EXPECT_DOUBLE_EQ(empirical_correlation(oracle::exhaustive_base_argmax(s, b), s), 1.0);
}

TEST(ExhaustiveBaseArgmax, PointMassPicksLowestIndex) {
  const auto b = base_class(4, 2);
  const Dataset s(8, {6, 1}, {-1, 1});
  const std::vector<double> w{1.0, 0.0};
  const auto h = oracle::exhaustive_base_argmax(s, w, b);
  EXPECT_EQ(h(6), -1.0);
  // Lowest index with h(6) = -1: block 0 takes row 0 (+), block 1 the first signed row negative at offset 2.
  const auto& e = std::get<Hypothesis::HadamardBlock>(h.repr()).element;
  EXPECT_EQ(e[0], (SignedRow{0, 1}));
  EXPECT_EQ(e[1], (SignedRow{0, -1}));
}

TEST(ExhaustiveBaseArgmax, Guard) {
  const auto b = base_class(32, 4);  // 64^4 elements
  const std::vector<double> mass(128, 0.0);
  EXPECT_THROW(oracle::exhaustive_base_argmax(mass, b), GuardError);
}

TEST(NaiveAgnosticBoost, TableShapeAndStreamedAgreement) {
  const auto learner = make_hadamard_learner(base_class(4, 2));
  Rng rng(31);
  for (std::size_t m : {3u, 9u}) {
    for (std::uint64_t seed = 0; seed < (m == 3 ? 4u : 20u); ++seed) {
      const Dataset s = testutil::random_dataset(8, m, rng);
      AgnosticBoostConfig cfg;
      cfg.oracle_mode = true;
      cfg.seed = seed;
      cfg.rounds_override = 60;
      const auto slow = oracle::naive_agnostic_boost(s, learner, cfg);
      const auto fast = agnostic_boost(s, learner, cfg);
      ASSERT_EQ(slow.losses.size(), std::size_t{1} << (m / 3));
      for (std::size_t r = 0; r < slow.losses.size(); ++r) EXPECT_EQ(slow.losses[r].id, r);
      EXPECT_EQ(slow.audit.chosen_id, fast.audit.chosen_id);
      for (std::size_t j = 0; j < slow.audit.slots.size(); ++j) {
        EXPECT_EQ(slow.audit.slots[j].winner, fast.audit.slots[j].winner);
        EXPECT_DOUBLE_EQ(slow.audit.slots[j].validation_loss, fast.audit.slots[j].validation_loss);
        EXPECT_DOUBLE_EQ(slow.audit.slots[j].filter_loss, fast.audit.slots[j].filter_loss);
      }
      EXPECT_EQ(evaluate_all(slow.hypothesis, 8), evaluate_all(fast.hypothesis, 8));
    }
  }
}

TEST(NaiveAgnosticBoost, FilterViolationsGrowWithMargin) {
  const auto learner = make_hadamard_learner(base_class(4, 2));
  Rng rng(2);
  const Dataset s = testutil::random_dataset(8, 12, rng);
  AgnosticBoostConfig cfg;
  cfg.oracle_mode = true;
  cfg.rounds_override = 40;
  const auto res = oracle::naive_agnostic_boost(s, learner, cfg);
  for (const auto& row : res.losses)
    for (std::size_t j = 1; j < row.filter_violations.size(); ++j)
      EXPECT_LE(row.filter_violations[j], row.filter_violations[j - 1]);
}
