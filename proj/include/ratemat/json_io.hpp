#pragma once

#include <cstddef>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratemat/convergence.hpp"
#include "ratemat/ct_estimators.hpp"
#include "ratemat/dt_estimators.hpp"
#include "ratemat/error.hpp"
#include "ratemat/matrix.hpp"
#include "ratemat/path.hpp"

namespace ratemat::io {

using nlohmann::json;

// nlohmann::json writes doubles in their shortest round-trip form (at
// most 17 significant digits), so reports reproduce bit-exact values.

template <typename T>
json matrix_to_json(const SquareMatrix<T>& m) {
  return m.to_rows();
}

/// Row-major nested arrays with the state labels alongside.
inline json matrix_with_states(const StateSpace& space, const Matrix& m) {
  return {{"states", space.labels()}, {"matrix", matrix_to_json(m)}};
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "matrix must be a nested array");
  return Matrix::from_rows(j.get<std::vector<std::vector<double>>>());
}

// ---------------------------------------------------------------------------
// Path files: {"states": [...], "t_max": T, "segments": [[t0, "a"], ...]}
// ---------------------------------------------------------------------------

/// Parses and validates a path document. Structural problems in the JSON
/// itself throw InvalidArgument; path invariants throw their own kinds.
inline SamplePath path_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "path document must be an object");
  for (const char* key : {"states", "t_max", "segments"})
    if (!j.contains(key)) throw Error(ErrorKind::InvalidArgument, std::string("missing key '") + key + "'");
  const auto& states = j.at("states");
  const auto& t_max = j.at("t_max");
  const auto& segments = j.at("segments");
  if (!states.is_array()) throw Error(ErrorKind::InvalidArgument, "'states' must be an array");
  std::vector<std::string> labels;
  for (const auto& s : states) {
    if (!s.is_string()) throw Error(ErrorKind::InvalidArgument, "state labels must be strings");
    labels.push_back(s.get<std::string>());
  }
  if (!t_max.is_number()) throw Error(ErrorKind::InvalidArgument, "'t_max' must be a number");
  if (!segments.is_array()) throw Error(ErrorKind::InvalidArgument, "'segments' must be an array");
  std::vector<LabelledSegment> segs;
  for (const auto& seg : segments) {
    if (!seg.is_array() || seg.size() != 2 || !seg[0].is_number() || !seg[1].is_string())
      throw Error(ErrorKind::InvalidArgument, "each segment must be [time, \"state\"]");
    segs.push_back({seg[0].get<double>(), seg[1].get<std::string>()});
  }
  return validate_path(segs, t_max.get<double>(), StateSpace(std::move(labels)));
}

inline json path_to_json(const StateSpace& space, double t_max, const std::vector<Segment>& segments) {
  json segs = json::array();
  for (const auto& seg : segments) segs.push_back({seg.start, space.label(seg.state)});
  return {{"states", space.labels()}, {"t_max", t_max}, {"segments", std::move(segs)}};
}

inline json path_to_json(const RawPath& raw) { return path_to_json(raw.space, raw.t_max, raw.segments); }

inline json path_to_json(const SamplePath& path) {
  return path_to_json(path.space(), path.t_max(), path.segments());
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json stats_to_json(const SufficientStats& stats) {
  return {{"n", matrix_to_json(stats.counts)}, {"d", stats.durations}};
}

inline json stats_report(const StateSpace& space, const SufficientStats& stats) {
  return {{"states", space.labels()},
          {"t_max", stats.t_max},
          {"jump_count", stats.jump_count},
          {"n", matrix_to_json(stats.counts)},
          {"d", stats.durations}};
}

inline json discrete_stats_to_json(const DiscreteStats& d) {
  return {{"m", d.m}, {"delta", d.delta}, {"counts", matrix_to_json(d.counts)}, {"row_totals", d.row_totals}};
}

/// {"kind", "states", "q", "bounds", "s", "stats"}; bounds and s are null
/// for the precise estimators.
inline json estimate_report(const std::string& kind, const StateSpace& space, const RateMatrix& q,
                            const SufficientStats& stats, std::optional<double> s = std::nullopt,
                            const IntervalMatrix* bounds = nullptr) {
  json out = {{"kind", kind},
              {"states", space.labels()},
              {"q", matrix_to_json(q.matrix())},
              {"bounds", nullptr},
              {"s", nullptr},
              {"stats", stats_to_json(stats)}};
  if (bounds) out["bounds"] = {{"lower", matrix_to_json(bounds->lower)}, {"upper", matrix_to_json(bounds->upper)}};
  if (s) out["s"] = *s;
  return out;
}

/// Discrete-time counterpart of estimate_report at one level m. "t" is the
/// transition-matrix estimate, "q" the induced rate matrix (T - I) / delta,
/// and "bounds" the open IDM intervals on T.
inline json dt_estimate_report(const std::string& kind, const StateSpace& space, const DiscreteStats& dstats,
                               const TransitionMatrix& t, const std::vector<std::size_t>& undefined_rows,
                               std::optional<double> s = std::nullopt,
                               const OpenIntervalMatrix* bounds = nullptr) {
  const std::size_t k = space.size();
  Matrix q(k, 0.0);
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y) q(x, y) = (t(x, y) - (x == y ? 1.0 : 0.0)) / dstats.delta;
  json out = {{"kind", kind},
              {"states", space.labels()},
              {"m", dstats.m},
              {"delta", dstats.delta},
              {"t", matrix_to_json(t.matrix())},
              {"q", matrix_to_json(RateMatrix::from_off_diagonal(q).matrix())},
              {"bounds", nullptr},
              {"s", nullptr},
              {"undefined_rows", undefined_rows},
              {"stats", {{"n", matrix_to_json(dstats.counts)}, {"n_x", dstats.row_totals}}}};
  if (bounds)
    out["bounds"] = {{"lower", matrix_to_json(bounds->lower)},
                     {"upper", matrix_to_json(bounds->upper)},
                     {"open", true}};
  if (s) out["s"] = *s;
  return out;
}

inline json convergence_to_json(const ConvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"m", row.lemma2.m},
                    {"delta", row.lemma2.delta},
                    {"count_match", row.lemma2.count_match},
                    {"duration_err", row.lemma2.duration_err},
                    {"duration_bound", row.lemma2.duration_bound},
                    {"vertex_discrepancy", row.discrepancy.value},
                    {"undefined_rows", row.discrepancy.undefined_rows}});
  }
  return {{"s", r.s}, {"tol", r.rel_tol}, {"threshold", r.threshold}, {"rows", std::move(rows)}, {"pass", r.pass}};
}

/// One line per m; numbers with 17 significant digits.
inline std::string convergence_to_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "m,delta,count_match,duration_err,duration_bound,vertex_discrepancy,undefined_rows\n";
  for (const auto& row : r.rows) {
    os << row.lemma2.m << ',' << row.lemma2.delta << ',' << (row.lemma2.count_match ? "true" : "false") << ','
       << row.lemma2.duration_err << ',' << row.lemma2.duration_bound << ',' << row.discrepancy.value << ',';
    for (std::size_t i = 0; i < row.discrepancy.undefined_rows.size(); ++i)
      os << (i ? ";" : "") << row.discrepancy.undefined_rows[i];
    os << '\n';
  }
  return os.str();
}

inline json lower_op_report(const StateSpace& space, const std::vector<double>& lower,
                            const std::vector<double>& upper) {
  return {{"states", space.labels()}, {"lower", lower}, {"upper", upper}};
}

}  // namespace ratemat::io
