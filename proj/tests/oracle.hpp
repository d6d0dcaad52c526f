#pragma once

// Test-only reference computations. These are written from the
// definitions with the simplest possible loops and share no code paths
// with the library routines they check.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "ratemat/ratemat.hpp"

namespace ratemat::oracle {

/// The canonical three-state path used throughout the tests:
/// a on [0, 0.5), b on [0.5, 1.25), a on [1.25, 1.75), c on [1.75, 2].
inline SamplePath p1() {
  return validate_path(std::vector<Segment>{{0.0, 0}, {0.5, 1}, {1.25, 0}, {1.75, 2}}, 2.0,
                       StateSpace({"a", "b", "c"}));
}

/// State at time t by linear scan: last segment whose start is <= t.
inline std::size_t oracle_state_at(const std::vector<Segment>& segs, double t) {
  std::size_t state = segs.front().state;
  for (const auto& s : segs)
    if (s.start <= t) state = s.state;
  return state;
}

struct OracleDiscrete {
  std::vector<std::vector<long long>> counts;
  std::vector<long long> row_totals;
};

inline OracleDiscrete oracle_discrete(const SamplePath& path, std::size_t m) {
  const std::size_t k = path.num_states();
  OracleDiscrete out{std::vector<std::vector<long long>>(k, std::vector<long long>(k, 0)),
                     std::vector<long long>(k, 0)};
  std::vector<std::size_t> grid;
  for (std::size_t i = 0; i <= m; ++i) {
    const double t = static_cast<double>(i) * path.t_max() / static_cast<double>(m);
    grid.push_back(oracle_state_at(path.segments(), std::min(t, path.t_max())));
  }
  for (std::size_t i = 1; i <= m; ++i) {
    out.counts[grid[i - 1]][grid[i]] += 1;
    out.row_totals[grid[i - 1]] += 1;
  }
  return out;
}

/// d_x accumulated by walking epochs in reverse, a different summation
/// order than the library's.
inline std::vector<double> oracle_durations(const SamplePath& path) {
  std::vector<double> d(path.num_states(), 0.0);
  double end = path.t_max();
  const auto& segs = path.segments();
  for (std::size_t i = segs.size(); i-- > 0;) {
    d[segs[i].state] += end - segs[i].start;
    end = segs[i].start;
  }
  return d;
}

/// Random valid path: k states, `jumps` jumps at uniform epochs in (0, t_max),
/// every state visited. Retries until all states appear.
inline SamplePath random_path(std::mt19937_64& gen, std::size_t k, std::size_t jumps, double t_max) {
  std::uniform_real_distribution<double> time(0.0, t_max);
  std::uniform_int_distribution<std::size_t> state(0, k - 1);
  std::uniform_int_distribution<std::size_t> step(1, k - 1);
  for (;;) {
    std::vector<double> epochs;
    while (epochs.size() < jumps) {
      const double t = time(gen);
      if (t > 0.0 && std::find(epochs.begin(), epochs.end(), t) == epochs.end()) epochs.push_back(t);
    }
    std::sort(epochs.begin(), epochs.end());
    std::vector<Segment> segs{{0.0, state(gen)}};
    for (double t : epochs) segs.push_back({t, (segs.back().state + step(gen)) % k});
    std::vector<bool> seen(k, false);
    for (const auto& s : segs) seen[s.state] = true;
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
      return validate_path(std::move(segs), t_max, StateSpace::indexed(k));
  }
}

/// Random sufficient statistics with counts in [0, max_count] and
/// durations in [d_lo, d_hi].
inline SufficientStats random_stats(std::mt19937_64& gen, std::size_t k, long long max_count, double d_lo,
                                    double d_hi) {
  std::uniform_int_distribution<long long> count(0, max_count);
  std::uniform_real_distribution<double> dur(d_lo, d_hi);
  SufficientStats st{CountMatrix(k, 0), std::vector<double>(k), 0.0, 0};
  for (std::size_t x = 0; x < k; ++x) {
    st.durations[x] = dur(gen);
    st.t_max += st.durations[x];
    for (std::size_t y = 0; y < k; ++y)
      if (x != y) {
        st.counts(x, y) = count(gen);
        st.jump_count += st.counts(x, y);
      }
  }
  return st;
}

inline std::vector<double> random_gamble(std::mt19937_64& gen, std::size_t k, double scale) {
  std::uniform_real_distribution<double> v(-scale, scale);
  std::vector<double> h(k);
  for (auto& x : h) x = v(gen);
  return h;
}

/// Random transition matrix with strictly positive entries.
inline TransitionMatrix random_interior_transition(std::mt19937_64& gen, std::size_t k) {
  std::uniform_real_distribution<double> v(0.05, 1.0);
  Matrix m(k, 0.0);
  for (std::size_t x = 0; x < k; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < k; ++y) sum += (m(x, y) = v(gen));
    for (std::size_t y = 0; y < k; ++y) m(x, y) /= sum;
    double rest = 1.0;
    for (std::size_t y = 0; y + 1 < k; ++y) rest -= m(x, y);
    m(x, k - 1) = rest;
  }
  return validate_transition_matrix(m);
}

}  // namespace ratemat::oracle
