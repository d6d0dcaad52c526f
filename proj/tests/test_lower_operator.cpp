#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "ratemat/lower_operator.hpp"

using namespace ratemat;
using ratemat::oracle::p1;

namespace {

ImpreciseRateSet p1_set(double s) { return imprecise_estimate(sufficient_stats(p1()), s); }

void expect_vec_near(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "entry " << i;
}

}  // namespace

TEST(LowerRateApply, CanonicalHandCase) {
  const std::vector<double> h{0.0, 1.0, 2.0};
  expect_vec_near(lower_rate_apply(p1_set(1.0), h), {3.0, -8.0 / 3.0, -8.0}, 1e-14);
}

TEST(LowerRateApply, ConstantGambleGivesZero) {
  expect_vec_near(lower_rate_apply(p1_set(1.0), std::vector<double>{4.2, 4.2, 4.2}), {0.0, 0.0, 0.0}, 0.0);
}

TEST(LowerRateApply, ZeroImprecisionIsTheMlProduct) {
  const std::vector<double> h{0.3, -1.0, 2.5};
  expect_vec_near(lower_rate_apply(p1_set(0.0), h), ml_estimate(sufficient_stats(p1())).apply(h), 1e-14);
}

TEST(LowerRateApply, MinimumIncludesTheStateItself) {
  // h(b) is the strict minimum, so row b gets no extra downward term; a
  // minimum over y != b would wrongly add (s/d_b)(h(a) - h(b)) > 0.
  const std::vector<double> h{1.0, 0.0, 2.0};
  const auto lower = lower_rate_apply(p1_set(1.0), h);
  EXPECT_NEAR(lower[1], 4.0 / 3.0 * 1.0, 1e-14);
}

TEST(LowerRateApply, GambleLengthChecked) {
  try {
    lower_rate_apply(p1_set(1.0), std::vector<double>{0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(LowerRateBruteforce, CanonicalHandCase) {
  const std::vector<double> h{0.0, 1.0, 2.0};
  expect_vec_near(lower_rate_bruteforce(p1_set(1.0), h), {3.0, -8.0 / 3.0, -8.0}, 1e-14);
  expect_vec_near(lower_rate_bruteforce(p1_set(1.0), h, Enumeration::Global), {3.0, -8.0 / 3.0, -8.0}, 1e-14);
}

TEST(LowerRateBruteforce, ZeroImprecisionSingleVertex) {
  const std::vector<double> h{1.0, -2.0, 0.5};
  expect_vec_near(lower_rate_bruteforce(p1_set(0.0), h), ml_estimate(sufficient_stats(p1())).apply(h), 1e-14);
}

TEST(LowerRateBruteforce, IndicatorGambleMatchesClosedForm) {
  for (double s : {0.3, 1.0, 4.0}) {
    const std::vector<double> h{1.0, 0.0, 0.0};
    expect_vec_near(lower_rate_bruteforce(p1_set(s), h), lower_rate_apply(p1_set(s), h), 1e-13);
  }
}

TEST(UpperRateApply, ConjugacyAndSpecialCases) {
  const std::vector<double> h{0.0, 1.0, 2.0};
  // Upper values frozen from exact rational evaluation of -lower(-h).
  expect_vec_near(upper_rate_apply(p1_set(1.0), h), {5.0, 0.0, 0.0}, 1e-14);
  expect_vec_near(upper_rate_apply(p1_set(1.0), std::vector<double>{-3.0, -3.0, -3.0}), {0.0, 0.0, 0.0}, 0.0);
  expect_vec_near(upper_rate_apply(p1_set(0.0), h), ml_estimate(sufficient_stats(p1())).apply(h), 1e-14);
}

TEST(LowerOperatorProperties, ClosedFormEqualsVertexEnumeration) {
  std::mt19937_64 gen(123);
  std::uniform_real_distribution<double> s_dist(0.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + i % 4;
    const auto set = imprecise_estimate(oracle::random_stats(gen, k, 10, 0.5, 5.0), s_dist(gen));
    const auto h = oracle::random_gamble(gen, k, 1.0);
    const auto closed = lower_rate_apply(set, h);
    expect_vec_near(closed, lower_rate_bruteforce(set, h), 1e-12);
    if (k <= 4) expect_vec_near(closed, lower_rate_bruteforce(set, h, Enumeration::Global), 1e-12);
  }
}

TEST(LowerOperatorProperties, AlgebraicLaws) {
  std::mt19937_64 gen(321);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const std::size_t k = 2 + i % 4;
    const auto set = imprecise_estimate(oracle::random_stats(gen, k, 10, 0.5, 5.0), u(gen));
    const auto h1 = oracle::random_gamble(gen, k, 1.0);
    const auto h2 = oracle::random_gamble(gen, k, 1.0);
    const double lambda = u(gen);
    const double c = u(gen) - 1.5;
    std::vector<double> sum(k), scaled(k), shifted(k);
    for (std::size_t x = 0; x < k; ++x) {
      sum[x] = h1[x] + h2[x];
      scaled[x] = lambda * h1[x];
      shifted[x] = h1[x] + c;
    }
    const auto l1 = lower_rate_apply(set, h1);
    const auto l2 = lower_rate_apply(set, h2);
    const auto ls = lower_rate_apply(set, sum);
    const auto lk = lower_rate_apply(set, scaled);
    const auto lc = lower_rate_apply(set, shifted);
    const auto up = upper_rate_apply(set, h1);
    for (std::size_t x = 0; x < k; ++x) {
      EXPECT_GE(ls[x], l1[x] + l2[x] - 1e-12);
      EXPECT_NEAR(lk[x], lambda * l1[x], 1e-12);
      EXPECT_NEAR(lc[x], l1[x], 1e-12);
      EXPECT_LE(l1[x], up[x] + 1e-12);
    }
    for (const auto& q : set.extreme_points()) {
      const auto qh = q.apply(h1);
      for (std::size_t x = 0; x < k; ++x) {
        EXPECT_LE(l1[x], qh[x] + 1e-12);
        EXPECT_GE(up[x], qh[x] - 1e-12);
      }
    }
  }
}
