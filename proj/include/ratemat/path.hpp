#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ratemat/error.hpp"
#include "ratemat/matrix.hpp"

namespace ratemat {

/// One constant piece of a path: the process sits in `state` from `start`
/// until the next segment's start (or the horizon).
struct Segment {
  double start = 0.0;
  std::size_t state = 0;

  bool operator==(const Segment&) const = default;
};

/// A segment as it appears in input files, with the state named by label.
struct LabelledSegment {
  double start = 0.0;
  std::string state;
};

/// Unvalidated path. Simulation produces these; they become SamplePaths
/// once every state has positive sojourn time.
struct RawPath {
  StateSpace space;
  double t_max = 0.0;
  std::vector<Segment> segments;
};

class SamplePath;
inline SamplePath validate_path(std::vector<Segment> segments, double t_max, StateSpace space);

/// Piecewise-constant right-continuous trajectory on [0, t_max] stored as
/// its jump epochs. Construct through validate_path.
class SamplePath {
 public:
  const StateSpace& space() const noexcept { return space_; }
  std::size_t num_states() const noexcept { return space_.size(); }
  double t_max() const noexcept { return t_max_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t jump_count() const noexcept { return segments_.size() - 1; }

  /// End of segment i (the next start, or t_max for the last one).
  double segment_end(std::size_t i) const {
    return i + 1 < segments_.size() ? segments_[i + 1].start : t_max_;
  }

  /// State at time t in [0, t_max]. Jump epochs belong to the new state.
  std::size_t state_at(double t) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.start; });
    return std::prev(it)->state;
  }

  /// Smallest gap between consecutive epochs, counting 0 and t_max as epochs.
  double min_epoch_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segments_.size(); ++i)
      gap = std::min(gap, segment_end(i) - segments_[i].start);
    return gap;
  }

 private:
  SamplePath(StateSpace space, double t_max, std::vector<Segment> segments)
      : space_(std::move(space)), t_max_(t_max), segments_(std::move(segments)) {}
  friend SamplePath validate_path(std::vector<Segment> segments, double t_max, StateSpace space);

  StateSpace space_;
  double t_max_;
  std::vector<Segment> segments_;
};

/// n_xy (x != y), d_x and the horizon of one or more observed paths.
struct SufficientStats {
  CountMatrix counts;
  std::vector<double> durations;
  double t_max = 0.0;
  long long jump_count = 0;

  std::size_t num_states() const noexcept { return durations.size(); }
};

/// Pools statistics of independent paths over the same state space. The
/// likelihood factorises over paths, so counts and durations simply add.
inline SufficientStats merge(const SufficientStats& a, const SufficientStats& b) {
  if (a.num_states() != b.num_states())
    throw Error(ErrorKind::DimensionMismatch, "cannot merge statistics over different state spaces");
  SufficientStats out = a;
  for (std::size_t x = 0; x < a.num_states(); ++x) {
    out.durations[x] += b.durations[x];
    for (std::size_t y = 0; y < a.num_states(); ++y) out.counts(x, y) += b.counts(x, y);
  }
  out.t_max += b.t_max;
  out.jump_count += b.jump_count;
  return out;
}

/// Path sampled on the grid i * t_max / m, i = 0..m.
struct DiscretePath {
  std::size_t m = 0;
  double delta = 0.0;
  std::size_t num_states = 0;
  std::vector<std::size_t> states;
};

/// One-step transition counts of a DiscretePath. Diagonal entries count
/// steps that stay put.
struct DiscreteStats {
  std::size_t m = 0;
  double delta = 0.0;
  CountMatrix counts;
  std::vector<long long> row_totals;

  std::size_t num_states() const noexcept { return row_totals.size(); }
};

namespace detail {

inline std::vector<double> segment_durations(const std::vector<Segment>& segments, double t_max,
                                             std::size_t k) {
  std::vector<double> d(k, 0.0);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const double end = i + 1 < segments.size() ? segments[i + 1].start : t_max;
    d[segments[i].state] += end - segments[i].start;
  }
  return d;
}

}  // namespace detail

/// Checks the structural invariants of a path and that every state is
/// occupied for a positive amount of time.
inline SamplePath validate_path(std::vector<Segment> segments, double t_max, StateSpace space) {
  if (!(std::isfinite(t_max) && t_max > 0.0))
    throw Error(ErrorKind::NonPositiveHorizon, "t_max must be positive and finite");
  if (segments.empty()) throw Error(ErrorKind::EmptyPath, "a path needs at least one segment");
  if (segments.front().start != 0.0)
    throw Error(ErrorKind::FirstSegmentNotZero, "the first segment must start at time 0",
                {.row = 0});
  const std::size_t k = space.size();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = segments[i];
    if (!std::isfinite(seg.start)) throw Error(ErrorKind::NonFinite, "segment start is not finite", {.row = i});
    if (seg.state >= k)
      throw Error(ErrorKind::UnknownState, "segment state index out of range", {.row = i});
    if (i > 0) {
      if (!(seg.start > segments[i - 1].start))
        throw Error(ErrorKind::NonIncreasingTimes,
                    "segment " + std::to_string(i) + " does not start after its predecessor",
                    {.row = i});
      if (seg.state == segments[i - 1].state)
        throw Error(ErrorKind::SelfTransition,
                    "segment " + std::to_string(i) + " repeats the previous state", {.row = i});
    }
    if (!(seg.start < t_max))
      throw Error(ErrorKind::SegmentBeyondHorizon,
                  "segment " + std::to_string(i) + " starts at or after t_max", {.row = i});
  }
  const auto d = detail::segment_durations(segments, t_max, k);
  for (std::size_t x = 0; x < k; ++x) {
    if (!(d[x] > 0.0))
      throw Error(ErrorKind::ZeroDurationState,
                  "state '" + space.label(x) + "' has zero total duration", {.row = x});
  }
  return SamplePath(std::move(space), t_max, std::move(segments));
}

inline SamplePath validate_path(const std::vector<LabelledSegment>& segments, double t_max,
                                StateSpace space) {
  std::vector<Segment> indexed;
  indexed.reserve(segments.size());
  for (const auto& seg : segments) indexed.push_back({seg.start, space.index_of(seg.state)});
  return validate_path(std::move(indexed), t_max, std::move(space));
}

inline SamplePath validate_path(const RawPath& raw) {
  return validate_path(raw.segments, raw.t_max, raw.space);
}

/// Exact counts and durations; durations are sums of segment lengths.
inline SufficientStats sufficient_stats(const SamplePath& path) {
  const std::size_t k = path.num_states();
  SufficientStats stats{CountMatrix(k, 0), {}, path.t_max(), 0};
  const auto& segs = path.segments();
  for (std::size_t i = 1; i < segs.size(); ++i) {
    ++stats.counts(segs[i - 1].state, segs[i].state);
    ++stats.jump_count;
  }
  stats.durations = detail::segment_durations(segs, path.t_max(), k);
  return stats;
}

/// Samples the path at i * t_max / m for i = 0..m.
inline DiscretePath discretize(const SamplePath& path, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "discretization level m must be positive");
  DiscretePath out{m, path.t_max() / static_cast<double>(m), path.num_states(), {}};
  out.states.reserve(m + 1);
  const auto& segs = path.segments();
  std::size_t seg = 0;
  for (std::size_t i = 0; i <= m; ++i) {
    // Grid times are computed directly rather than accumulated.
    const double t = i == m ? path.t_max()
                            : static_cast<double>(i) * path.t_max() / static_cast<double>(m);
    while (seg + 1 < segs.size() && segs[seg + 1].start <= t) ++seg;
    out.states.push_back(segs[seg].state);
  }
  return out;
}

inline DiscreteStats discrete_stats(const DiscretePath& dpath) {
  const std::size_t k = dpath.num_states;
  DiscreteStats out{dpath.m, dpath.delta, CountMatrix(k, 0), std::vector<long long>(k, 0)};
  for (std::size_t i = 1; i < dpath.states.size(); ++i) {
    ++out.counts(dpath.states[i - 1], dpath.states[i]);
    ++out.row_totals[dpath.states[i - 1]];
  }
  return out;
}

inline DiscreteStats discrete_stats(const SamplePath& path, std::size_t m) {
  return discrete_stats(discretize(path, m));
}

}  // namespace ratemat
