#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ratemat/ct_estimators.hpp"
#include "ratemat/error.hpp"
#include "ratemat/matrix.hpp"
#include "ratemat/path.hpp"

namespace ratemat {

/// Discrete-time ML estimate. Rows of states never left on the grid
/// (n_x = 0) have no estimate; they hold e_x and are marked undefined.
struct DtMlEstimate {
  TransitionMatrix t;
  std::vector<bool> defined;
};

inline DtMlEstimate dt_ml(const DiscreteStats& dstats) {
  const std::size_t k = dstats.num_states();
  Matrix t(k, 0.0);
  std::vector<bool> defined(k, true);
  for (std::size_t x = 0; x < k; ++x) {
    const auto nx = dstats.row_totals[x];
    if (nx == 0) {
      defined[x] = false;
      t(x, x) = 1.0;
      continue;
    }
    for (std::size_t y = 0; y < k; ++y)
      t(x, y) = static_cast<double>(dstats.counts(x, y)) / static_cast<double>(nx);
  }
  return {validate_transition_matrix(t), std::move(defined)};
}

/// Dirichlet posterior mean (s A(x,y) + n_xy) / (s + n_x).
inline TransitionMatrix dt_posterior_mean(double s, const TransitionMatrix& a,
                                          const DiscreteStats& dstats) {
  const std::size_t k = dstats.num_states();
  if (!(std::isfinite(s) && s >= 0.0))
    throw Error(ErrorKind::NegativeS, "prior strength s must be finite and >= 0");
  detail::require_same_size(a.size(), k);
  Matrix t(k, 0.0);
  for (std::size_t x = 0; x < k; ++x) {
    const double nx = static_cast<double>(dstats.row_totals[x]);
    if (s == 0.0 && nx == 0.0)
      throw Error(ErrorKind::DegenerateRow, "s = 0 and state never left on the grid", {.row = x});
    for (std::size_t y = 0; y < k; ++y)
      t(x, y) = (s * a(x, y) + static_cast<double>(dstats.counts(x, y))) / (s + nx);
  }
  return validate_transition_matrix(t);
}

/// Entry-wise range of an IDM posterior-mean set. Both ends are open: the
/// prior location ranges over the interior of the transition matrices.
struct OpenIntervalMatrix {
  Matrix lower;
  Matrix upper;
  bool lower_open = true;
  bool upper_open = true;
};

/// Set of IDM posterior means
///
///   T_s^(m) = { T : T(x,y) = (s A(x,y) + n_xy) / (s + n_x), A in int(T) }
///
/// for one discretization level.
class ImpreciseTransSet {
 public:
  ImpreciseTransSet(DiscreteStats dstats, double s) : s_(s), dstats_(std::move(dstats)) {
    if (!(std::isfinite(s_) && s_ >= 0.0))
      throw Error(ErrorKind::NegativeS, "imprecision parameter s must be finite and >= 0");
  }

  double s() const noexcept { return s_; }
  const DiscreteStats& dstats() const noexcept { return dstats_; }
  std::size_t size() const noexcept { return dstats_.num_states(); }

  /// T(x,y) in (n_xy / (s + n_x), (s + n_xy) / (s + n_x)).
  OpenIntervalMatrix idm_bounds() const {
    if (s_ == 0.0) throw Error(ErrorKind::ZeroS, "IDM bounds need s > 0");
    const std::size_t k = size();
    OpenIntervalMatrix b{Matrix(k, 0.0), Matrix(k, 0.0)};
    for (std::size_t x = 0; x < k; ++x) {
      const double denom = s_ + static_cast<double>(dstats_.row_totals[x]);
      for (std::size_t y = 0; y < k; ++y) {
        const double n = static_cast<double>(dstats_.counts(x, y));
        b.lower(x, y) = n / denom;
        b.upper(x, y) = (s_ + n) / denom;
      }
    }
    return b;
  }

 private:
  double s_;
  DiscreteStats dstats_;
};

/// Rate matrices induced by T_s^(m) through T -> (T - I) / delta. The set
/// is not closed (A ranges over an open set), so vertices are those of its
/// closure: for row x and choice z, with z == x putting the pseudo-count
/// mass on the diagonal,
///
///   q_xy = (s [y == z] + n_xy) / (delta (s + n_x)),  y != x.
///
/// A row with s = 0 and n_x = 0 has no estimate; it is reported by
/// undefined_rows() and filled with zeros.
class InducedRateSet {
 public:
  InducedRateSet(DiscreteStats dstats, double s) : s_(s), dstats_(std::move(dstats)) {
    if (!(std::isfinite(s_) && s_ >= 0.0))
      throw Error(ErrorKind::NegativeS, "imprecision parameter s must be finite and >= 0");
  }

  double s() const noexcept { return s_; }
  double delta() const noexcept { return dstats_.delta; }
  const DiscreteStats& dstats() const noexcept { return dstats_; }
  std::size_t size() const noexcept { return dstats_.num_states(); }

  bool row_defined(std::size_t x) const { return s_ > 0.0 || dstats_.row_totals[x] > 0; }

  std::vector<std::size_t> undefined_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < size(); ++x)
      if (!row_defined(x)) out.push_back(x);
    return out;
  }

  double closure_vertex_entry(std::size_t x, std::size_t choice, std::size_t y) const {
    if (!row_defined(x)) return 0.0;
    const double extra = (y == choice && y != x) ? s_ : 0.0;
    const double denom = dstats_.delta * (s_ + static_cast<double>(dstats_.row_totals[x]));
    return (extra + static_cast<double>(dstats_.counts(x, y))) / denom;
  }

  RateMatrix closure_vertex(const std::vector<std::size_t>& choice) const {
    const std::size_t k = size();
    Matrix q(k, 0.0);
    for (std::size_t x = 0; x < k; ++x) {
      const std::size_t c = choice.empty() ? x : choice.at(x);
      for (std::size_t y = 0; y < k; ++y)
        if (x != y) q(x, y) = closure_vertex_entry(x, c, y);
    }
    return RateMatrix::from_off_diagonal(std::move(q));
  }

  /// k^k closure vertices for s > 0, the single matrix (T_ML - I) / delta
  /// for s = 0. Same enumeration order and limit as ImpreciseRateSet.
  std::vector<RateMatrix> closure_extreme_points() const {
    const std::size_t k = size();
    if (s_ == 0.0) return {closure_vertex({})};
    if (std::pow(static_cast<double>(k), static_cast<double>(k)) > kMaxVertices)
      throw Error(ErrorKind::TooManyVertices, "k^k exceeds the enumeration limit of 10^6");
    std::vector<RateMatrix> out;
    std::vector<std::size_t> choice(k, 0);
    for (;;) {
      out.push_back(closure_vertex(choice));
      std::size_t row = k;
      while (row > 0) {
        --row;
        if (++choice[row] < k) break;
        choice[row] = 0;
        if (row == 0) return out;
      }
    }
  }

 private:
  double s_;
  DiscreteStats dstats_;
};

inline InducedRateSet induced_rate_set(const ImpreciseTransSet& set) {
  return InducedRateSet(set.dstats(), set.s());
}

}  // namespace ratemat
