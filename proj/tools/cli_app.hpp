#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratemat/json_io.hpp"
#include "ratemat/ratemat.hpp"

namespace ratemat::cli {

/// Process exit codes.
enum Exit : int {
  kOk = 0,
  kInputError = 2,
  kDegenerateSimulation = 3,
  kAssumptionViolated = 4,
  kConvergenceFail = 5,
};

struct RunConfig {
  std::string input;
  std::string output;
  double s = 1.0;
  std::string m;
  bool m_given = false;  // distinguishes an explicit empty --m from no --m
  std::uint64_t seed = 0;
  std::string mode = "ml";
  std::string h;
  std::string format = "json";
  double tol = 1e-3;
  std::string q;
  std::string initial;
  double t_max = 1.0;
  std::string states;
  std::string alpha;
  std::string beta;
};

namespace detail {

using nlohmann::json;

// Thrown for bad command-line values; maps to kInputError.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inline JSON, or the contents of a file when prefixed with '@'.
inline json parse_json_arg(const std::string& text, const std::string& what) {
  const std::string body = !text.empty() && text.front() == '@' ? read_file(text.substr(1)) : text;
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

/// "1,2,4", "[1,2,4]" or a single number.
inline std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::string trimmed = text;
  if (!trimmed.empty() && trimmed.front() == '[') {
    const auto j = parse_json_arg(trimmed, what);
    if (!j.is_array()) throw UsageError(what + " must be an array");
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw UsageError(what + " must contain numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(trimmed);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError(what + ": '" + item + "' is not a number");
    }
    if (used != item.size()) throw UsageError(what + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

inline std::vector<std::size_t> parse_m_values(const std::string& text) {
  const auto values = parse_number_list(text, "--m");
  if (values.empty()) throw UsageError("--m needs at least one value");
  std::vector<std::size_t> out;
  for (double v : values) {
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw UsageError("--m values must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

inline SamplePath load_path(const std::string& file) {
  if (file.empty()) throw UsageError("--input is required");
  json doc;
  try {
    doc = json::parse(read_file(file));
  } catch (const json::exception& e) {
    throw UsageError("malformed path file: " + std::string(e.what()));
  }
  try {
    return io::path_from_json(doc);
  } catch (const json::exception& e) {
    throw UsageError("malformed path file: " + std::string(e.what()));
  }
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + cfg.output + "'");
  f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RATEMAT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    } catch (const std::exception&) {
    }
  }
  return n;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.q.empty()) throw UsageError("--q is required");
  if (cfg.initial.empty()) throw UsageError("--initial is required");
  const auto q = validate_rate_matrix(io::matrix_from_json(parse_json_arg(cfg.q, "--q")));
  const auto initial = parse_number_list(cfg.initial, "--initial");
  std::optional<StateSpace> space;
  if (!cfg.states.empty()) {
    const auto labels = parse_json_arg(cfg.states, "--states");
    space.emplace(labels.get<std::vector<std::string>>());
  } else {
    space.emplace(StateSpace::indexed(q.size()));
  }
  const auto sim = simulate(SimConfig{q, initial, cfg.t_max, cfg.seed}, *space);
  emit(cfg, dump(io::path_to_json(sim.path)), out);
  if (!sim.unvisited.empty()) {
    err << "unvisited states:";
    for (auto x : sim.unvisited) err << ' ' << space->label(x);
    err << '\n';
    return kDegenerateSimulation;
  }
  return kOk;
}

inline int cmd_stats(const RunConfig& cfg, std::ostream& out) {
  const auto path = load_path(cfg.input);
  const auto stats = sufficient_stats(path);
  auto report = io::stats_report(path.space(), stats);
  if (cfg.m_given) {
    json levels = json::array();
    for (auto m : parse_m_values(cfg.m)) levels.push_back(io::discrete_stats_to_json(discrete_stats(path, m)));
    report["discrete"] = std::move(levels);
  }
  emit(cfg, dump(report), out);
  return kOk;
}

inline int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const auto path = load_path(cfg.input);
  const auto& space = path.space();
  const std::size_t k = space.size();
  const auto stats = sufficient_stats(path);
  if (cfg.mode != "ml" && cfg.mode != "bayes" && cfg.mode != "imprecise")
    throw UsageError("--mode must be ml, bayes or imprecise");

  if (cfg.m_given) {
    const auto ms = parse_m_values(cfg.m);
    if (ms.size() != 1) throw UsageError("estimate takes a single --m value");
    const auto dstats = discrete_stats(path, ms.front());
    if (cfg.mode == "ml") {
      const auto est = dt_ml(dstats);
      std::vector<std::size_t> undefined;
      for (std::size_t x = 0; x < k; ++x)
        if (!est.defined[x]) undefined.push_back(x);
      emit(cfg, dump(io::dt_estimate_report("ml", space, dstats, est.t, undefined)), out);
    } else if (cfg.mode == "bayes") {
      const auto a = cfg.alpha.empty()
                         ? validate_transition_matrix(Matrix(k, 1.0 / static_cast<double>(k)))
                         : validate_transition_matrix(io::matrix_from_json(parse_json_arg(cfg.alpha, "--alpha")));
      const auto t = dt_posterior_mean(cfg.s, a, dstats);
      emit(cfg, dump(io::dt_estimate_report("bayes", space, dstats, t, {}, cfg.s)), out);
    } else {
      const ImpreciseTransSet set(dstats, cfg.s);
      const auto est = dt_ml(dstats);
      const InducedRateSet induced(dstats, cfg.s);
      std::optional<OpenIntervalMatrix> bounds;
      if (cfg.s > 0.0) bounds = set.idm_bounds();
      emit(cfg,
           dump(io::dt_estimate_report("imprecise", space, dstats, est.t, induced.undefined_rows(), cfg.s,
                                       bounds ? &*bounds : nullptr)),
           out);
    }
    return kOk;
  }

  if (cfg.mode == "ml") {
    emit(cfg, dump(io::estimate_report("ml", space, ml_estimate(stats), stats)), out);
  } else if (cfg.mode == "bayes") {
    GammaHyper h = GammaHyper::zero(k);
    if (!cfg.alpha.empty()) h.alpha = io::matrix_from_json(parse_json_arg(cfg.alpha, "--alpha"));
    if (!cfg.beta.empty()) h.beta = parse_number_list(cfg.beta, "--beta");
    emit(cfg, dump(io::estimate_report("bayes", space, posterior_mean(h, stats), stats)), out);
  } else {
    const auto set = imprecise_estimate(stats, cfg.s);
    const auto bounds = set.element_bounds();
    emit(cfg, dump(io::estimate_report("imprecise", space, ml_estimate(stats), stats, cfg.s, &bounds)), out);
  }
  return kOk;
}

inline int cmd_convergence(const RunConfig& cfg, std::ostream& out) {
  const auto path = load_path(cfg.input);
  const auto ms = !cfg.m_given ? dyadic_sweep(3, 16) : parse_m_values(cfg.m);
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  const auto report = theorem1_report(path, cfg.s, ms, cfg.tol, thread_cap());
  emit(cfg, cfg.format == "csv" ? io::convergence_to_csv(report) : dump(io::convergence_to_json(report)), out);
  return report.pass ? kOk : kConvergenceFail;
}

inline int cmd_lower_op(const RunConfig& cfg, std::ostream& out) {
  const auto path = load_path(cfg.input);
  if (cfg.h.empty()) throw UsageError("--h is required");
  const auto h = parse_number_list(cfg.h, "--h");
  if (h.size() != path.num_states())
    throw UsageError("--h has " + std::to_string(h.size()) + " entries, expected " +
                     std::to_string(path.num_states()));
  const auto set = imprecise_estimate(sufficient_stats(path), cfg.s);
  emit(cfg, dump(io::lower_op_report(path.space(), lower_rate_apply(set, h), upper_rate_apply(set, h))), out);
  return kOk;
}

}  // namespace detail

/// Parses argv-style arguments (args[0] is the program name) and runs the
/// selected subcommand. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transition rate matrix estimation for continuous-time Markov chains", "ratemat"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_input = [&](CLI::App* sub) { sub->add_option("--input", cfg.input, "Path JSON file")->required(); };
  auto add_output = [&](CLI::App* sub) { sub->add_option("--output", cfg.output, "Write to file instead of stdout"); };

  auto* sim = app.add_subcommand("simulate", "Simulate a sample path from a rate matrix");
  sim->add_option("--q", cfg.q, "Rate matrix as JSON nested array, or @file")->required();
  sim->add_option("--initial", cfg.initial, "Initial distribution, e.g. 1,0,0")->required();
  sim->add_option("--t-max", cfg.t_max, "Observation horizon")->required();
  sim->add_option("--seed", cfg.seed, "Generator seed");
  sim->add_option("--states", cfg.states, "State labels as JSON array");
  add_output(sim);

  auto* st = app.add_subcommand("stats", "Sufficient statistics of a path");
  add_input(st);
  st->add_option("--m", cfg.m, "Also report discrete counts for these levels");
  add_output(st);

  auto* est = app.add_subcommand("estimate", "Estimate the rate matrix");
  add_input(est);
  est->add_option("--mode", cfg.mode, "ml | bayes | imprecise");
  est->add_option("--s", cfg.s, "Imprecision parameter / prior strength");
  est->add_option("--m", cfg.m, "Discretization level for a discrete-time report");
  est->add_option("--alpha", cfg.alpha, "Prior shapes (JSON matrix); discrete mode: prior location A");
  est->add_option("--beta", cfg.beta, "Prior rates, e.g. 1,1,1");
  add_output(est);

  auto* conv = app.add_subcommand("convergence", "Discrete-to-continuous convergence report");
  add_input(conv);
  conv->add_option("--s", cfg.s, "Imprecision parameter");
  conv->add_option("--m", cfg.m, "Increasing discretization levels (default 2^3..2^16)");
  conv->add_option("--tol", cfg.tol, "PASS tolerance relative to the largest vertex entry");
  conv->add_option("--format", cfg.format, "json | csv");
  add_output(conv);

  auto* low = app.add_subcommand("lower-op", "Lower and upper transition rate operators");
  low->set_help_flag("--help", "Print this help message and exit");  // frees -h for the gamble
  add_input(low);
  low->add_option("--s", cfg.s, "Imprecision parameter");
  low->add_option("--h", cfg.h, "Gamble, e.g. 0,1,2")->required();
  add_output(low);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  }

  for (const auto* sub : {st, est, conv})
    if (*sub) cfg.m_given = sub->count("--m") > 0;

  try {
    if (*sim) return detail::cmd_simulate(cfg, out, err);
    if (*st) return detail::cmd_stats(cfg, out);
    if (*est) return detail::cmd_estimate(cfg, out);
    if (*conv) return detail::cmd_convergence(cfg, out);
    return detail::cmd_lower_op(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ZeroDurationState ? kAssumptionViolated : kInputError;
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace ratemat::cli
