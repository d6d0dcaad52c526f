#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "ratemat/error.hpp"

namespace ratemat {

/// Ordered, duplicate-free list of state labels. The position of a label
/// is its row/column index in every matrix built over this space.
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) {
      throw Error(ErrorKind::TooSmall, "a state space needs at least two states");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!seen.insert(labels_[i]).second) {
        throw Error(ErrorKind::DuplicateLabel, "duplicate state label '" + labels_[i] + "'",
                    {.row = i});
      }
    }
  }

  /// Labels "s0", "s1", ... for callers that only care about indices.
  static StateSpace indexed(std::size_t k) {
    std::vector<std::string> labels;
    labels.reserve(k);
    for (std::size_t i = 0; i < k; ++i) labels.push_back("s" + std::to_string(i));
    return StateSpace(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      throw Error(ErrorKind::UnknownState, "state '" + label + "' is not in the state space");
    }
    return static_cast<std::size_t>(it - labels_.begin());
  }

  bool operator==(const StateSpace&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Dense row-major k x k matrix.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t k, T fill = T{}) : k_(k), data_(k * k, fill) {}

  SquareMatrix(std::initializer_list<std::initializer_list<T>> rows) : k_(rows.size()) {
    data_.reserve(k_ * k_);
    for (const auto& r : rows) {
      if (r.size() != k_) {
        throw Error(ErrorKind::NotSquare, "matrix rows must all have length " + std::to_string(k_));
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static SquareMatrix identity(std::size_t k) {
    SquareMatrix m(k);
    for (std::size_t i = 0; i < k; ++i) m(i, i) = T{1};
    return m;
  }

  /// Builds from nested rows; throws NotSquare unless every row has rows.size() entries.
  static SquareMatrix from_rows(const std::vector<std::vector<T>>& rows) {
    SquareMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        throw Error(ErrorKind::NotSquare,
                    "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                        " entries, expected " + std::to_string(rows.size()),
                    {.row = i});
      }
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.k_);
    }
    return m;
  }

  std::size_t size() const noexcept { return k_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * k_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * k_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * k_, k_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * k_, k_}; }

  std::vector<std::vector<T>> to_rows() const {
    std::vector<std::vector<T>> rows(k_);
    for (std::size_t i = 0; i < k_; ++i) rows[i].assign(row(i).begin(), row(i).end());
    return rows;
  }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t k_ = 0;
  std::vector<T> data_;
};

using Matrix = SquareMatrix<double>;
using CountMatrix = SquareMatrix<long long>;

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "matrix sizes differ");
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out = std::max(out, std::abs(a(i, j) - b(i, j)));
  return out;
}

namespace detail {

inline void require_shape(const Matrix& m) {
  if (m.size() < 2) throw Error(ErrorKind::TooSmall, "matrices need k >= 2");
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (!std::isfinite(m(i, j)))
        throw Error(ErrorKind::NonFinite, "entry is not finite", {.row = i, .col = j});
}

// Off-diagonal sum, accumulated left to right. Every diagonal closure in
// the library goes through here so equal inputs give bitwise-equal rows.
inline double off_diagonal_sum(const Matrix& m, std::size_t x) {
  double sum = 0.0;
  for (std::size_t y = 0; y < m.size(); ++y)
    if (y != x) sum += m(x, y);
  return sum;
}

}  // namespace detail

class RateMatrix;
class TransitionMatrix;
inline RateMatrix validate_rate_matrix(const Matrix& m);
inline TransitionMatrix validate_transition_matrix(const Matrix& m);

/// Transition rate matrix: non-negative off-diagonal entries, rows summing
/// to zero. Only obtainable through validation, so holding one is proof of
/// the invariants. The diagonal is always stored as the exact negative
/// off-diagonal row sum.
class RateMatrix {
 public:
  std::size_t size() const noexcept { return m_.size(); }
  double operator()(std::size_t x, std::size_t y) const { return m_(x, y); }
  const Matrix& matrix() const noexcept { return m_; }

  /// Exit rate of state x, i.e. -Q(x,x).
  double exit_rate(std::size_t x) const { return -m_(x, x); }

  /// (Qh)(x) = sum_y Q(x,y) h(y).
  std::vector<double> apply(std::span<const double> h) const {
    if (h.size() != size()) throw Error(ErrorKind::DimensionMismatch, "gamble length differs from k");
    std::vector<double> out(size(), 0.0);
    for (std::size_t x = 0; x < size(); ++x)
      for (std::size_t y = 0; y < size(); ++y) out[x] += m_(x, y) * h[y];
    return out;
  }

  /// Takes the off-diagonal part of `m` (diagonal ignored) and closes rows.
  static RateMatrix from_off_diagonal(Matrix m) {
    detail::require_shape(m);
    for (std::size_t x = 0; x < m.size(); ++x) {
      for (std::size_t y = 0; y < m.size(); ++y) {
        if (x != y && m(x, y) < 0.0)
          throw Error(ErrorKind::NegativeOffDiagonal, "negative off-diagonal rate",
                      {.row = x, .col = y});
      }
      m(x, x) = -detail::off_diagonal_sum(m, x);
    }
    return RateMatrix(std::move(m));
  }

  bool operator==(const RateMatrix&) const = default;

 private:
  explicit RateMatrix(Matrix m) : m_(std::move(m)) {}
  friend RateMatrix validate_rate_matrix(const Matrix& m);

  Matrix m_;
};

/// Row-stochastic matrix.
class TransitionMatrix {
 public:
  std::size_t size() const noexcept { return m_.size(); }
  double operator()(std::size_t x, std::size_t y) const { return m_(x, y); }
  const Matrix& matrix() const noexcept { return m_; }

  bool operator==(const TransitionMatrix&) const = default;

 private:
  explicit TransitionMatrix(Matrix m) : m_(std::move(m)) {}
  friend TransitionMatrix validate_transition_matrix(const Matrix& m);

  Matrix m_;
};

inline constexpr double kRowSumTolerance = 1e-12;

inline RateMatrix validate_rate_matrix(const Matrix& m) {
  detail::require_shape(m);
  const std::size_t k = m.size();
  for (std::size_t x = 0; x < k; ++x) {
    double sum = 0.0;
    double l1 = 0.0;
    for (std::size_t y = 0; y < k; ++y) {
      if (x != y && m(x, y) < 0.0)
        throw Error(ErrorKind::NegativeOffDiagonal, "negative off-diagonal rate",
                    {.row = x, .col = y});
      sum += m(x, y);
      l1 += std::abs(m(x, y));
    }
    if (std::abs(sum) > kRowSumTolerance * std::max(1.0, l1))
      throw Error(ErrorKind::RowSumNonZero, "row " + std::to_string(x) + " does not sum to zero",
                  {.row = x, .residual = sum});
  }
  Matrix closed = m;
  for (std::size_t x = 0; x < k; ++x) closed(x, x) = -detail::off_diagonal_sum(closed, x);
  return RateMatrix(std::move(closed));
}

inline TransitionMatrix validate_transition_matrix(const Matrix& m) {
  detail::require_shape(m);
  const std::size_t k = m.size();
  for (std::size_t x = 0; x < k; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < k; ++y) {
      if (m(x, y) < 0.0)
        throw Error(ErrorKind::NegativeEntry, "negative probability", {.row = x, .col = y});
      sum += m(x, y);
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw Error(ErrorKind::RowSumNotOne, "row " + std::to_string(x) + " does not sum to one",
                  {.row = x, .residual = sum - 1.0});
  }
  return TransitionMatrix(m);
}

/// True iff every entry is strictly positive, i.e. T lies in the interior
/// of the set of transition matrices.
inline bool interior_check(const TransitionMatrix& t) {
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t y = 0; y < t.size(); ++y)
      if (!(t(x, y) > 0.0)) return false;
  return true;
}

}  // namespace ratemat
