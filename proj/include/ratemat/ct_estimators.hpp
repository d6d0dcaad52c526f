#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ratemat/error.hpp"
#include "ratemat/matrix.hpp"
#include "ratemat/path.hpp"

namespace ratemat {

/// Hyperparameters of the product-of-Gamma prior on the off-diagonal
/// rates: shape alpha(x,y) per transition and rate beta[x] per row. Zero
/// values are allowed and give an improper prior.
struct GammaHyper {
  Matrix alpha;
  std::vector<double> beta;

  static GammaHyper zero(std::size_t k) { return {Matrix(k, 0.0), std::vector<double>(k, 0.0)}; }
};

/// Enumeration limit for vertex lists (k^k matrices).
inline constexpr double kMaxVertices = 1e6;

struct IntervalMatrix {
  Matrix lower;
  Matrix upper;
};

namespace detail {

inline void require_positive_durations(const SufficientStats& stats) {
  for (std::size_t x = 0; x < stats.num_states(); ++x)
    if (!(stats.durations[x] > 0.0))
      throw Error(ErrorKind::ZeroDurationState, "state has zero total duration", {.row = x});
}

inline void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorKind::DimensionMismatch, "dimension mismatch between arguments");
}

}  // namespace detail

/// Log of the CTMC path likelihood prod_{x!=y} q_xy^n_xy exp(-q_xy d_x).
/// Returns -infinity when an observed transition has zero rate.
inline double log_likelihood(const RateMatrix& q, const SufficientStats& stats) {
  detail::require_same_size(q.size(), stats.num_states());
  double ll = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    for (std::size_t y = 0; y < q.size(); ++y) {
      if (x == y) continue;
      const double rate = q(x, y);
      const auto n = stats.counts(x, y);
      if (n > 0) {
        if (rate == 0.0) return -std::numeric_limits<double>::infinity();
        ll += static_cast<double>(n) * std::log(rate);
      }
      ll -= rate * stats.durations[x];
    }
  }
  return ll;
}

/// q_xy = n_xy / d_x.
inline RateMatrix ml_estimate(const SufficientStats& stats) {
  detail::require_positive_durations(stats);
  const std::size_t k = stats.num_states();
  Matrix q(k, 0.0);
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      if (x != y) q(x, y) = static_cast<double>(stats.counts(x, y)) / stats.durations[x];
  return RateMatrix::from_off_diagonal(std::move(q));
}

/// Posterior mean (alpha_xy + n_xy) / (beta_x + d_x). When alpha_xy and n_xy
/// are both zero the posterior is a point mass at zero and the estimate is
/// exactly 0.
inline RateMatrix posterior_mean(const GammaHyper& h, const SufficientStats& stats) {
  const std::size_t k = stats.num_states();
  detail::require_same_size(h.alpha.size(), k);
  detail::require_same_size(h.beta.size(), k);
  detail::require_positive_durations(stats);
  Matrix q(k, 0.0);
  for (std::size_t x = 0; x < k; ++x) {
    if (!(std::isfinite(h.beta[x]) && h.beta[x] >= 0.0))
      throw Error(ErrorKind::InvalidArgument, "beta must be finite and non-negative", {.row = x});
    for (std::size_t y = 0; y < k; ++y) {
      if (x == y) continue;
      const double a = h.alpha(x, y);
      if (!(std::isfinite(a) && a >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "alpha must be finite and non-negative",
                    {.row = x, .col = y});
      const auto n = stats.counts(x, y);
      if (a == 0.0 && n == 0) continue;
      q(x, y) = (a + static_cast<double>(n)) / (h.beta[x] + stats.durations[x]);
    }
  }
  return RateMatrix::from_off_diagonal(std::move(q));
}

/// The set-valued estimator
///
///   Q_s = { Q : q_xy = (s A(x,y) + n_xy) / d_x for x != y, A a transition matrix }.
///
/// Row x of Q_s is the ML row shifted by (s / d_x) times any point of the
/// corner simplex { a >= 0, sum a <= 1 } over the off-diagonal entries, so
/// the set is a product of k simplices. It is stored through (s, stats) and
/// every query below is closed-form.
class ImpreciseRateSet {
 public:
  ImpreciseRateSet(SufficientStats stats, double s) : s_(s), stats_(std::move(stats)) {
    if (!(std::isfinite(s_) && s_ >= 0.0))
      throw Error(ErrorKind::NegativeS, "imprecision parameter s must be finite and >= 0");
    detail::require_positive_durations(stats_);
  }

  double s() const noexcept { return s_; }
  const SufficientStats& stats() const noexcept { return stats_; }
  std::size_t size() const noexcept { return stats_.num_states(); }

  /// Off-diagonal entries of the row-x vertex that puts all pseudo-count
  /// mass on `choice`; choice == x is the vertex with no extra mass.
  double vertex_entry(std::size_t x, std::size_t choice, std::size_t y) const {
    const double extra = (y == choice && y != x) ? s_ : 0.0;
    return (extra + static_cast<double>(stats_.counts(x, y))) / stats_.durations[x];
  }

  /// q_xy ranges over [n_xy / d_x, (s + n_xy) / d_x]. Diagonal intervals are
  /// the hull [-sum upper, -sum lower]; not every combination inside the
  /// box is a member, see contains().
  IntervalMatrix element_bounds() const {
    const std::size_t k = size();
    IntervalMatrix b{Matrix(k, 0.0), Matrix(k, 0.0)};
    for (std::size_t x = 0; x < k; ++x) {
      const double d = stats_.durations[x];
      double lo_sum = 0.0;
      double hi_sum = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        if (x == y) continue;
        const double n = static_cast<double>(stats_.counts(x, y));
        b.lower(x, y) = n / d;
        b.upper(x, y) = (s_ + n) / d;
        lo_sum += b.lower(x, y);
        hi_sum += b.upper(x, y);
      }
      b.lower(x, x) = -hi_sum;
      b.upper(x, x) = -lo_sum;
    }
    return b;
  }

  /// Membership with absolute tolerance on the implied pseudo-counts
  /// alpha_xy = q_xy d_x - n_xy: needs alpha >= -tol and row sums <= s + tol.
  bool contains(const RateMatrix& q, double tol = 1e-9) const {
    detail::require_same_size(q.size(), size());
    for (std::size_t x = 0; x < size(); ++x) {
      double row_alpha = 0.0;
      for (std::size_t y = 0; y < size(); ++y) {
        if (x == y) continue;
        const double alpha = q(x, y) * stats_.durations[x] - static_cast<double>(stats_.counts(x, y));
        if (alpha < -tol) return false;
        row_alpha += alpha;
      }
      if (row_alpha > s_ + tol) return false;
    }
    return true;
  }

  /// Number of vertices of Q_s: k^k for s > 0, 1 for s = 0.
  double vertex_count() const {
    return s_ == 0.0 ? 1.0 : std::pow(static_cast<double>(size()), static_cast<double>(size()));
  }

  /// All vertices, rows enumerated in mixed radix (row 0 varies slowest).
  /// Throws TooManyVertices past one million.
  std::vector<RateMatrix> extreme_points() const {
    if (vertex_count() > kMaxVertices)
      throw Error(ErrorKind::TooManyVertices, "k^k exceeds the enumeration limit of 10^6");
    const std::size_t k = size();
    if (s_ == 0.0) return {vertex({})};
    std::vector<RateMatrix> out;
    out.reserve(static_cast<std::size_t>(vertex_count()));
    std::vector<std::size_t> choice(k, 0);
    for (;;) {
      out.push_back(vertex(choice));
      std::size_t row = k;
      while (row > 0) {
        --row;
        if (++choice[row] < k) break;
        choice[row] = 0;
        if (row == 0) return out;
      }
    }
  }

  /// Vertex with per-row choices; an empty choice list means the ML vertex.
  RateMatrix vertex(const std::vector<std::size_t>& choice) const {
    const std::size_t k = size();
    Matrix q(k, 0.0);
    for (std::size_t x = 0; x < k; ++x) {
      const std::size_t c = choice.empty() ? x : choice.at(x);
      for (std::size_t y = 0; y < k; ++y)
        if (x != y) q(x, y) = vertex_entry(x, c, y);
    }
    return RateMatrix::from_off_diagonal(std::move(q));
  }

 private:
  double s_;
  SufficientStats stats_;
};

inline ImpreciseRateSet imprecise_estimate(const SufficientStats& stats, double s) {
  return ImpreciseRateSet(stats, s);
}

}  // namespace ratemat
