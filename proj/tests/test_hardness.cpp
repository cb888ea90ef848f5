#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "agboost/core.hpp"
#include "agboost/hadamard.hpp"
#include "agboost/hardness.hpp"

using namespace agboost;

TEST(HadamardMatrix, SmallCases) {
  const auto h1 = hadamard_matrix(1);
  EXPECT_EQ(h1(0, 0), 1);
  const auto h2 = hadamard_matrix(2);
  EXPECT_EQ(h2(0, 0), 1);
  EXPECT_EQ(h2(0, 1), 1);
  EXPECT_EQ(h2(1, 0), 1);
  EXPECT_EQ(h2(1, 1), -1);
}

TEST(HadamardMatrix, RowsOrthogonalUpTo64) {
  for (std::size_t n = 1; n <= 64; n *= 2) {
    const auto h = hadamard_matrix(n);
    std::size_t zero_pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(h.row_dot(i, i), static_cast<long long>(n));
      for (std::size_t j = i + 1; j < n; ++j) {
        EXPECT_EQ(h.row_dot(i, j), 0) << "n=" << n << " rows " << i << "," << j;
        zero_pairs += h.row_dot(i, j) == 0;
      }
    }
    if (n == 8) {
      EXPECT_EQ(zero_pairs, 28u);
    }
  }
}

TEST(HadamardMatrix, RejectsNonPowerOfTwo) {
  EXPECT_THROW(hadamard_matrix(0), ValidationError);
  EXPECT_THROW(hadamard_matrix(6), ValidationError);
}

TEST(BaseClass, EnumeratesSignedRowsForTwoByOne) {
  const auto b = base_class(2, 1);
  EXPECT_DOUBLE_EQ(b.size(), 4.0);
  std::set<std::vector<int>> seen;
  for (std::uint64_t idx = 0; idx < 4; ++idx) {
    const auto e = b.element_at(idx);
    seen.insert({base_eval(b, e, 0), base_eval(b, e, 1)});
  }
  const std::set<std::vector<int>> expected{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  EXPECT_EQ(seen, expected);
  // Candidate order: row 0 (+), row 0 (-), row 1 (+), row 1 (-).
  EXPECT_EQ(b.element_at(1)[0], (SignedRow{0, -1}));
  EXPECT_EQ(b.element_at(2)[0], (SignedRow{1, 1}));
}

TEST(BaseClass, EvaluatesBlockwise) {
  const auto b = base_class(4, 2);
  EXPECT_DOUBLE_EQ(b.log2_size(), 6.0);
  EXPECT_EQ(b.universe_size(), 8u);
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const auto e = b.element_at(idx);
    for (std::size_t x = 0; x < 8; ++x) {
      const int v = base_eval(b, e, x);
      EXPECT_TRUE(v == 1 || v == -1);
      EXPECT_EQ(v, e[x / 4].sign * b.matrix()(e[x / 4].row, x % 4));
    }
  }
  EXPECT_THROW(base_eval(b, b.element_at(0), 8), ValidationError);
}

TEST(WeakLearnerM0, FormulaValues) {
  // ceil(6400 ln 160) = ceil(32481.112...)
  EXPECT_EQ(weak_learner_m0(8, 0.5, 0.1, 0.1), 32482u);
  for (double d : {1.0, 3.0, 8.0, 17.0}) {
    const auto base = weak_learner_m0(d, 0.5, 0.1, 0.1);
    const auto doubled = weak_learner_m0(2 * d, 0.5, 0.1, 0.1);
    EXPECT_LE(doubled, 2 * base);
    EXPECT_GE(doubled + 1, 2 * base);
    const auto halved_eps = weak_learner_m0(d, 0.5, 0.1, 0.05);
    EXPECT_LE(halved_eps, 4 * base);
    EXPECT_GE(halved_eps + 3, 4 * base);
  }
  // ceil(8 ln(2 * 64 / 0.1) / 0.04) = ceil(1430.92...)
  EXPECT_EQ(hoeffding_m0(64, 0.1, 0.2), 1431u);
}

TEST(HardInstance, MinimalAdmissibleM) {
  EXPECT_EQ(min_admissible_m(5, 0.2), 278u);
  EXPECT_EQ(min_admissible_m(8, 0.1), 500u);
}

TEST(HardInstance, MassAndOptimalError) {
  Rng rng(42);
  for (auto [d, L] : std::vector<std::pair<std::size_t, double>>{{2, 0.3}, {5, 0.2}, {8, 0.1}, {10, 0.45}}) {
    const double m = static_cast<double>(min_admissible_m(d, L));
    const auto inst = hard_instance(d, L, m, std::nullopt, rng);
    EXPECT_NEAR(inst.distribution.total_mass(), 1.0, 1e-12);
    EXPECT_LT(inst.p * static_cast<double>(d - 1), 1.0);
    EXPECT_NEAR(inst.c, std::sqrt(static_cast<double>(d) / (64.0 * m * L)), 1e-15);
    EXPECT_NEAR(error_binary(inst.f_b, inst.distribution), L, 1e-12);
    const auto bayes = bayes_error(inst.distribution);
    EXPECT_NEAR(bayes.error, L, 1e-12);
    EXPECT_EQ(evaluate_all(bayes.witness, d), evaluate_all(inst.f_b, d));
    EXPECT_EQ(inst.b.back(), 1);
  }
}

TEST(HardInstance, ExplicitSigns) {
  Rng rng(0);
  const auto inst = hard_instance(4, 0.2, 1000.0, std::vector<int>{1, -1, -1}, rng);
  EXPECT_EQ(inst.b, (std::vector<int>{1, -1, -1, 1}));
  EXPECT_GT(inst.distribution.mass(1, -1), inst.distribution.mass(1, 1));
  EXPECT_DOUBLE_EQ(inst.distribution.mass(3, -1), 0.0);
}

TEST(HardInstance, ExcessErrorIdentityExhaustive) {
  Rng rng(17);
  for (std::size_t d = 2; d <= 10; ++d) {
    const double L = 0.05 + 0.4 * rng.uniform();
    const auto inst = hard_instance(d, L, static_cast<double>(min_admissible_m(d, L)), std::nullopt, rng);
    const double anchor_penalty = 1.0 - static_cast<double>(d - 1) * inst.p;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << d); ++idx) {
      std::vector<double> t(d);
      std::size_t hamming = 0;
      for (std::size_t x = 0; x < d; ++x) {
        t[x] = ((idx >> x) & 1U) ? 1.0 : -1.0;
        if (x + 1 < d && t[x] != inst.b[x]) ++hamming;
      }
      const double excess = error_binary(Hypothesis::table(t), inst.distribution) - L;
      double expected = 2.0 * inst.p * inst.c * static_cast<double>(hamming);
      if (t[d - 1] != 1.0) expected += anchor_penalty;
      EXPECT_NEAR(excess, expected, 1e-12) << "d=" << d << " table " << idx;
    }
  }
}

TEST(HardInstance, RejectsRegimeViolations) {
  Rng rng(0);
  EXPECT_THROW(hard_instance(1, 0.2, 1e6, std::nullopt, rng), ValidationError);
  EXPECT_THROW(hard_instance(5, 0.5, 1e6, std::nullopt, rng), ValidationError);
  EXPECT_THROW(hard_instance(5, 0.2, 100.0, std::nullopt, rng), ValidationError);
  EXPECT_THROW(hard_instance(3, 0.2, 1e6, std::vector<int>{1, 0}, rng), ValidationError);
}
