#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ratemat/error.hpp"
#include "ratemat/matrix.hpp"
#include "ratemat/path.hpp"

namespace ratemat {

// The generator is std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Uniforms are derived from its raw 64-bit words below
// rather than through <random> distributions, whose algorithms are
// implementation-defined, so paths are identical across toolchains.
using Generator = std::mt19937_64;

/// Uniform on the open interval (0, 1): the top 53 bits plus one half ulp.
inline double uniform_open(Generator& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform on [0, 1).
inline double uniform_half_open(Generator& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Exponential(rate) by inverse CDF.
inline double exponential(Generator& gen, double rate) { return -std::log(uniform_open(gen)) / rate; }

struct SimConfig {
  RateMatrix q;
  std::vector<double> initial;
  double t_max = 1.0;
  std::uint64_t seed = 0;
};

struct SimulatedPath {
  RawPath path;
  /// States with zero sojourn time; non-empty means validate_path would
  /// reject the path with ZeroDurationState.
  std::vector<std::size_t> unvisited;
};

namespace detail {

// Index drawn from the weights w (summing to `total`); zero-weight
// entries are never returned.
inline std::size_t draw_index(Generator& gen, std::span<const double> w, double total,
                              std::size_t skip) {
  const double target = uniform_half_open(gen) * total;
  double acc = 0.0;
  std::size_t last_positive = w.size();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i == skip || !(w[i] > 0.0)) continue;
    acc += w[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace detail

/// Jump-chain simulation: exponential holding times with the exit rate of
/// the current state, then a jump proportional to the off-diagonal rates.
/// Deterministic given the seed.
inline SimulatedPath simulate(const SimConfig& cfg, const StateSpace& space) {
  const std::size_t k = cfg.q.size();
  if (space.size() != k) throw Error(ErrorKind::DimensionMismatch, "state space and Q differ in size");
  if (cfg.initial.size() != k)
    throw Error(ErrorKind::InvalidInitial, "initial distribution has the wrong length");
  double mass = 0.0;
  for (std::size_t x = 0; x < k; ++x) {
    if (!std::isfinite(cfg.initial[x]) || cfg.initial[x] < 0.0)
      throw Error(ErrorKind::InvalidInitial, "initial probabilities must be finite and >= 0",
                  {.row = x});
    mass += cfg.initial[x];
  }
  if (std::abs(mass - 1.0) > kRowSumTolerance)
    throw Error(ErrorKind::InvalidInitial, "initial distribution does not sum to one",
                {.residual = mass - 1.0});
  if (!(std::isfinite(cfg.t_max) && cfg.t_max > 0.0))
    throw Error(ErrorKind::NonPositiveHorizon, "t_max must be positive and finite");

  Generator gen(cfg.seed);
  SimulatedPath out{RawPath{space, cfg.t_max, {}}, {}};
  std::size_t state = detail::draw_index(gen, cfg.initial, mass, k);
  double t = 0.0;
  out.path.segments.push_back({0.0, state});
  for (;;) {
    const double rate = cfg.q.exit_rate(state);
    if (!(rate > 0.0)) break;
    double next = t;
    // A holding time too small to move t would create a repeated epoch.
    while (!(next > t)) next = t + exponential(gen, rate);
    if (next >= cfg.t_max) break;
    t = next;
    state = detail::draw_index(gen, cfg.q.matrix().row(state), rate, state);
    out.path.segments.push_back({t, state});
  }

  const auto d = detail::segment_durations(out.path.segments, cfg.t_max, k);
  for (std::size_t x = 0; x < k; ++x)
    if (!(d[x] > 0.0)) out.unvisited.push_back(x);
  return out;
}

inline SimulatedPath simulate(const SimConfig& cfg) {
  return simulate(cfg, StateSpace::indexed(cfg.q.size()));
}

}  // namespace ratemat
