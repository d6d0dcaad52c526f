#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "ratemat/ct_estimators.hpp"
#include "ratemat/dt_estimators.hpp"
#include "ratemat/error.hpp"
#include "ratemat/path.hpp"

namespace ratemat {

/// Comparison of one discretization level with the continuous statistics.
struct Lemma2Record {
  std::size_t m = 0;
  double delta = 0.0;
  /// Off-diagonal discrete counts equal the continuous counts.
  bool count_match = false;
  /// max_x |delta n_x^(m) - d_x|.
  double duration_err = 0.0;
  /// J delta: each grid cell containing a jump is off by less than delta.
  double duration_bound = 0.0;
};

inline Lemma2Record lemma2_record(const SufficientStats& stats, const DiscreteStats& dstats) {
  const std::size_t k = stats.num_states();
  detail::require_same_size(dstats.num_states(), k);
  Lemma2Record rec{dstats.m, dstats.delta, true, 0.0,
                   static_cast<double>(stats.jump_count) * dstats.delta};
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y)
      if (x != y && dstats.counts(x, y) != stats.counts(x, y)) rec.count_match = false;
    const double approx = dstats.delta * static_cast<double>(dstats.row_totals[x]);
    rec.duration_err = std::max(rec.duration_err, std::abs(approx - stats.durations[x]));
  }
  return rec;
}

inline std::vector<Lemma2Record> lemma2_check(const SamplePath& path,
                                              const std::vector<std::size_t>& m_values) {
  if (m_values.empty()) throw Error(ErrorKind::InvalidArgument, "m_values must not be empty");
  const auto stats = sufficient_stats(path);
  std::vector<Lemma2Record> out;
  out.reserve(m_values.size());
  for (auto m : m_values) out.push_back(lemma2_record(stats, discrete_stats(path, m)));
  return out;
}

struct VertexDiscrepancy {
  /// Max-norm over matched closure vertices (row x, choice z) and all k
  /// entries of the row, diagonal included. Undefined rows are skipped.
  double value = 0.0;
  std::vector<std::size_t> undefined_rows;
};

/// Matched-vertex distance between the closure of Q_s^(m) and Q_s. Both
/// sets are products of simplices whose vertices are indexed the same way,
/// so any point of one set maps to a point of the other no further away
/// than this value; it bounds their Hausdorff distance.
inline VertexDiscrepancy vertex_discrepancy(const SufficientStats& stats,
                                            const DiscreteStats& dstats, double s) {
  const ImpreciseRateSet ct(stats, s);
  const InducedRateSet dt(dstats, s);
  detail::require_same_size(dt.size(), ct.size());
  const std::size_t k = ct.size();
  VertexDiscrepancy out{0.0, dt.undefined_rows()};
  for (std::size_t x = 0; x < k; ++x) {
    if (!dt.row_defined(x)) continue;
    const std::size_t first = s > 0.0 ? 0 : x;
    const std::size_t last = s > 0.0 ? k : x + 1;
    for (std::size_t z = first; z < last; ++z) {
      double ct_diag = 0.0;
      double dt_diag = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        if (y == x) continue;
        const double a = ct.vertex_entry(x, z, y);
        const double b = dt.closure_vertex_entry(x, z, y);
        ct_diag -= a;
        dt_diag -= b;
        out.value = std::max(out.value, std::abs(a - b));
      }
      out.value = std::max(out.value, std::abs(ct_diag - dt_diag));
    }
  }
  return out;
}

/// Largest absolute entry over all vertices of Q_s, diagonal included.
inline double max_vertex_magnitude(const ImpreciseRateSet& set) {
  const std::size_t k = set.size();
  double out = 0.0;
  for (std::size_t x = 0; x < k; ++x) {
    const std::size_t first = set.s() > 0.0 ? 0 : x;
    const std::size_t last = set.s() > 0.0 ? k : x + 1;
    for (std::size_t z = first; z < last; ++z) {
      double diag = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        if (y == x) continue;
        const double v = set.vertex_entry(x, z, y);
        diag += v;
        out = std::max(out, v);
      }
      out = std::max(out, diag);
    }
  }
  return out;
}

struct ConvergenceRow {
  Lemma2Record lemma2;
  VertexDiscrepancy discrepancy;
};

struct ConvergenceReport {
  double s = 0.0;
  double rel_tol = 0.0;
  /// rel_tol times the largest vertex magnitude of Q_s.
  double threshold = 0.0;
  std::vector<ConvergenceRow> rows;
  bool pass = false;
};

/// m = 2^lo, ..., 2^hi.
inline std::vector<std::size_t> dyadic_sweep(unsigned lo, unsigned hi) {
  std::vector<std::size_t> out;
  for (unsigned e = lo; e <= hi; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

/// Discrepancy sweep over increasing m. PASS needs the last discrepancy
/// below threshold, no smaller value earlier in the sweep, and every row
/// defined at the last m. Rows are computed on up to `threads` workers;
/// the result does not depend on the thread count.
inline ConvergenceReport theorem1_report(const SamplePath& path, double s,
                                         const std::vector<std::size_t>& m_values, double rel_tol,
                                         unsigned threads = 1) {
  if (m_values.empty()) throw Error(ErrorKind::InvalidArgument, "m_values must not be empty");
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] == 0) throw Error(ErrorKind::InvalidArgument, "m values must be positive");
    if (i > 0 && m_values[i] <= m_values[i - 1])
      throw Error(ErrorKind::InvalidArgument, "m values must be strictly increasing");
  }
  if (!(std::isfinite(rel_tol) && rel_tol >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "tolerance must be finite and >= 0");

  const auto stats = sufficient_stats(path);
  const ImpreciseRateSet ct(stats, s);
  ConvergenceReport report{s, rel_tol, rel_tol * max_vertex_magnitude(ct), {}, false};
  report.rows.resize(m_values.size());

  auto work = [&](std::size_t i) {
    const auto dstats = discrete_stats(path, m_values[i]);
    report.rows[i] = {lemma2_record(stats, dstats), vertex_discrepancy(stats, dstats, s)};
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, m_values.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < m_values.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < m_values.size(); i = next++) work(i);
      });
  }

  const auto& last = report.rows.back().discrepancy;
  bool final_is_min = true;
  for (const auto& row : report.rows)
    if (row.discrepancy.undefined_rows.empty() && row.discrepancy.value < last.value)
      final_is_min = false;
  report.pass = last.undefined_rows.empty() && last.value < report.threshold && final_is_min;
  return report;
}

/// Mean of discrepancy(m_{i+1}) / discrepancy(m_i) over the last `pairs`
/// consecutive rows. A 0/0 ratio counts as 0.
inline double mean_decay_ratio(const ConvergenceReport& report, std::size_t pairs) {
  const auto& rows = report.rows;
  if (pairs == 0 || rows.size() < pairs + 1)
    throw Error(ErrorKind::InvalidArgument, "not enough rows for the requested decay window");
  double sum = 0.0;
  for (std::size_t i = rows.size() - pairs; i < rows.size(); ++i) {
    const double prev = rows[i - 1].discrepancy.value;
    const double cur = rows[i].discrepancy.value;
    sum += prev == 0.0 ? (cur == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()) : cur / prev;
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace ratemat
