#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "ratemat/dt_estimators.hpp"

using namespace ratemat;
using ratemat::oracle::p1;

TEST(DtMl, CanonicalPathCoarseGrid) {
  const auto est = dt_ml(discrete_stats(p1(), 4));
  EXPECT_EQ(est.defined, (std::vector<bool>{true, true, false}));
  EXPECT_DOUBLE_EQ(est.t(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(est.t(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(est.t(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(est.t(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(est.t(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(est.t(1, 2), 0.0);
  EXPECT_EQ(est.t(2, 2), 1.0);
}

TEST(DtMl, CanonicalPathFinerGrid) {
  const auto est = dt_ml(discrete_stats(p1(), 8));
  EXPECT_EQ(est.defined, (std::vector<bool>{true, true, true}));
  const Matrix expected{{0.5, 0.25, 0.25}, {1.0 / 3.0, 2.0 / 3.0, 0.0}, {0.0, 0.0, 1.0}};
  EXPECT_LE(max_abs_diff(est.t.matrix(), expected), 1e-15);
}

TEST(DtMl, DiagonalOnlyCountsGiveIdentity) {
  DiscreteStats ds{6, 0.5, CountMatrix{{2, 0, 0}, {0, 3, 0}, {0, 0, 1}}, {2, 3, 1}};
  EXPECT_EQ(dt_ml(ds).t.matrix(), Matrix::identity(3));
}

TEST(DtPosteriorMean, EmptyRowKeepsPriorLocation) {
  const auto a = validate_transition_matrix(Matrix(3, 1.0 / 3.0));
  const auto t = dt_posterior_mean(1.0, a, discrete_stats(p1(), 4));
  for (std::size_t y = 0; y < 3; ++y) EXPECT_DOUBLE_EQ(t(2, y), 1.0 / 3.0);
}

TEST(DtPosteriorMean, ZeroStrengthIsTheMle) {
  const auto ds = discrete_stats(p1(), 8);
  const auto a = validate_transition_matrix(Matrix(3, 1.0 / 3.0));
  EXPECT_EQ(dt_posterior_mean(0.0, a, ds), dt_ml(ds).t);
  try {
    dt_posterior_mean(0.0, a, discrete_stats(p1(), 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateRow);
    EXPECT_EQ(e.site().row, 2u);
  }
}

TEST(DtPosteriorMean, LargeStrengthApproachesPrior) {
  std::mt19937_64 gen(1);
  const auto a = oracle::random_interior_transition(gen, 3);
  const auto t = dt_posterior_mean(1e6, a, discrete_stats(p1(), 64));
  EXPECT_LE(max_abs_diff(t.matrix(), a.matrix()), 1e-4);
}

TEST(DtPosteriorMean, InteriorPriorStaysStrictlyInsideIdmBounds) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 200; ++i) {
    const auto path = oracle::random_path(gen, 3, 6, 2.0);
    const auto ds = discrete_stats(path, 1 + static_cast<std::size_t>(i));
    const double s = 0.5 + 0.01 * i;
    const auto a = oracle::random_interior_transition(gen, 3);
    const auto t = dt_posterior_mean(s, a, ds);
    const auto b = ImpreciseTransSet(ds, s).idm_bounds();
    for (std::size_t x = 0; x < 3; ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < 3; ++y) {
        row += t(x, y);
        EXPECT_GT(t(x, y), b.lower(x, y));
        EXPECT_LT(t(x, y), b.upper(x, y));
      }
      EXPECT_NEAR(row, 1.0, 1e-15);
    }
  }
}

TEST(IdmBounds, CanonicalPath) {
  const auto ds = discrete_stats(p1(), 4);
  const auto b = ImpreciseTransSet(ds, 1.0).idm_bounds();
  EXPECT_DOUBLE_EQ(b.lower(0, 1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.upper(0, 1), 2.0 / 3.0);
  EXPECT_TRUE(b.lower_open);
  EXPECT_TRUE(b.upper_open);
  for (std::size_t y = 0; y < 3; ++y) {
    EXPECT_EQ(b.lower(2, y), 0.0);
    EXPECT_EQ(b.upper(2, y), 1.0);
  }
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      EXPECT_NEAR(b.upper(x, y) - b.lower(x, y), 1.0 / (1.0 + static_cast<double>(ds.row_totals[x])), 1e-15);
}

TEST(IdmBounds, ZeroStrengthRejected) {
  try {
    ImpreciseTransSet(discrete_stats(p1(), 4), 0.0).idm_bounds();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroS);
  }
}

TEST(InducedRateSet, ZeroStrengthIsTheRescaledMle) {
  const auto ds = discrete_stats(p1(), 4);
  const auto set = induced_rate_set(ImpreciseTransSet(ds, 0.0));
  const auto v = set.closure_extreme_points();
  ASSERT_EQ(v.size(), 1u);
  const auto t = dt_ml(ds).t;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      if (x != y) {
        EXPECT_DOUBLE_EQ(v[0](x, y), t(x, y) / ds.delta);
      }
  EXPECT_EQ(set.undefined_rows(), (std::vector<std::size_t>{2}));
}

TEST(InducedRateSet, VertexArithmetic) {
  const InducedRateSet set(discrete_stats(p1(), 8), 1.0);
  EXPECT_DOUBLE_EQ(set.closure_vertex_entry(0, 1, 1), 1.6);
  EXPECT_DOUBLE_EQ(set.closure_vertex_entry(0, 1, 2), 0.8);
}

TEST(InducedRateSet, ClosureVerticesAreRateMatrices) {
  const InducedRateSet set(discrete_stats(p1(), 8), 1.0);
  const auto v = set.closure_extreme_points();
  EXPECT_EQ(v.size(), 27u);
  for (const auto& q : v) EXPECT_NO_THROW(validate_rate_matrix(q.matrix()));
}

TEST(InducedRateSet, VerticesMatchRescaledIdmCorners) {
  // A vertex of the closure is (T - I) / delta with T's row x at the corner
  // of the IDM bounds that puts all of s on column z.
  const auto ds = discrete_stats(p1(), 16);
  const double s = 2.0;
  const InducedRateSet set(ds, s);
  const auto b = ImpreciseTransSet(ds, s).idm_bounds();
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t z = 0; z < 3; ++z)
      for (std::size_t y = 0; y < 3; ++y)
        if (y != x) {
          EXPECT_NEAR(set.closure_vertex_entry(x, z, y), (y == z ? b.upper(x, y) : b.lower(x, y)) / ds.delta,
                      1e-13);
        }
}
