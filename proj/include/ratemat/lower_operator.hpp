#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ratemat/ct_estimators.hpp"
#include "ratemat/error.hpp"

namespace ratemat {

/// Real-valued function on the state space, indexed like the StateSpace.
using Gamble = std::vector<double>;

namespace detail {

inline void require_gamble(std::span<const double> h, std::size_t k) {
  if (h.size() != k) throw Error(ErrorKind::DimensionMismatch, "gamble length differs from k");
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!std::isfinite(h[i])) throw Error(ErrorKind::NonFinite, "gamble entry is not finite", {.row = i});
}

}  // namespace detail

/// Lower envelope of h -> Qh over Q in Q_s:
///
///   [Q h](x) = (s / d_x) min_y (h(y) - h(x)) + sum_{y != x} (n_xy / d_x) (h(y) - h(x)).
///
/// The minimum runs over every y including x itself, so the first term is
/// never positive.
inline std::vector<double> lower_rate_apply(const ImpreciseRateSet& set, std::span<const double> h) {
  const std::size_t k = set.size();
  detail::require_gamble(h, k);
  const auto& stats = set.stats();
  std::vector<double> out(k, 0.0);
  for (std::size_t x = 0; x < k; ++x) {
    const double d = stats.durations[x];
    double min_diff = 0.0;
    double drift = 0.0;
    for (std::size_t y = 0; y < k; ++y) {
      const double diff = h[y] - h[x];
      min_diff = std::min(min_diff, diff);
      if (y != x) drift += static_cast<double>(stats.counts(x, y)) / d * diff;
    }
    out[x] = set.s() / d * min_diff + drift;
  }
  return out;
}

/// -lower(-h).
inline std::vector<double> upper_rate_apply(const ImpreciseRateSet& set, std::span<const double> h) {
  std::vector<double> neg(h.begin(), h.end());
  for (auto& v : neg) v = -v;
  auto out = lower_rate_apply(set, neg);
  for (auto& v : out) v = -v;
  return out;
}

enum class Enumeration {
  /// k row vertices per state; (Qh)(x) only depends on row x.
  PerRow,
  /// All k^k vertex matrices from extreme_points().
  Global,
};

/// Minimum of (Qh)(x) over the vertices of Q_s. The objective is linear and
/// Q_s is a product of row simplices, so this is the exact infimum.
inline std::vector<double> lower_rate_bruteforce(const ImpreciseRateSet& set,
                                                 std::span<const double> h,
                                                 Enumeration mode = Enumeration::PerRow) {
  const std::size_t k = set.size();
  detail::require_gamble(h, k);
  std::vector<double> out(k, std::numeric_limits<double>::infinity());
  if (mode == Enumeration::Global) {
    for (const auto& q : set.extreme_points()) {
      const auto qh = q.apply(h);
      for (std::size_t x = 0; x < k; ++x) out[x] = std::min(out[x], qh[x]);
    }
    return out;
  }
  const std::size_t choices = set.s() > 0.0 ? k : 1;
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t c = 0; c < choices; ++c) {
      const std::size_t z = set.s() > 0.0 ? c : x;
      double diag = 0.0;
      double value = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        if (y == x) continue;
        const double q = set.vertex_entry(x, z, y);
        diag -= q;
        value += q * h[y];
      }
      value += diag * h[x];
      out[x] = std::min(out[x], value);
    }
  }
  return out;
}

}  // namespace ratemat
