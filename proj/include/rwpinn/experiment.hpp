// Copyright 2026 The rwpinn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Config-driven experiment runner: training, evaluation and plot-ready
// artifacts for one (problem, method) pair, plus the preset suite.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwpinn/metrics.hpp"
#include "rwpinn/train.hpp"

namespace rwpinn {

struct ExperimentConfig {
  std::string experiment;  // table the row belongs to; defaults to the problem name
  std::string problem = "burgess1d";
  std::string method = "pinn";
  double rw_scale = 1.0;
  ProblemOptions problem_options;
  SamplerConfig sampler;
  NetworkConfig network;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  int resolution = 0;  // test grid; 0 picks a per-dimension default
  bool timing = true;
  bool primary = true;
  std::string out = "out";

  std::string experiment_name() const { return experiment.empty() ? problem : experiment; }
  WeightScheme scheme() const { return {parse_method(method), rw_scale}; }
  ProblemSpec make() const { return make_problem(problem, problem_options); }

  void validate() const {
    const ProblemSpec p = make();
    scheme().validate();
    sampler.validate(p);
    network.validate();
    optimizer.validate();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ArgumentError("config: '" + key + "' expects a number, got '" + v + "'");
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw ArgumentError("config: '" + key + "' expects an integer, got '" + v + "'");
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ArgumentError("config: '" + key + "' expects true or false, got '" + v + "'");
}

}  // namespace detail

/// "sweep" or a comma-separated list of positive numbers.
inline std::vector<double> parse_lambdas(const std::string& v) {
  if (v == "sweep") return lambda_sweep();
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(detail::parse_double("lambda", detail::trim(item)));
  if (out.empty()) throw ArgumentError("config: empty lambda list");
  return out;
}

/// Applies one key/value setting. Throws ArgumentError on unknown keys.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& v) {
  using detail::parse_double;
  using detail::parse_int;
  auto as_int = [&](const std::string& k) { return static_cast<int>(parse_int(k, v)); };
  if (key == "experiment") c.experiment = v;
  else if (key == "problem") c.problem = v;
  else if (key == "method") c.method = v;
  else if (key == "rw_scale") c.rw_scale = parse_double(key, v);
  else if (key == "gamma") c.problem_options.gamma = parse_double(key, v);
  else if (key == "beta") c.problem_options.beta = parse_double(key, v);
  else if (key == "sampling") {
    if (v == "sobol") c.sampler.strategy = SamplingStrategy::Sobol;
    else if (v == "random") c.sampler.strategy = SamplingStrategy::Random;
    else throw ArgumentError("config: sampling must be sobol or random");
  }
  else if (key == "n_int") c.sampler.n_int = as_int(key);
  else if (key == "n_sb") c.sampler.n_sb = as_int(key);
  else if (key == "n_tb") c.sampler.n_tb = as_int(key);
  else if (key == "n_d") c.sampler.n_d = as_int(key);
  else if (key == "hidden_layers") c.network.hidden_layers = as_int(key);
  else if (key == "width") c.network.width = as_int(key);
  else if (key == "restarts") c.optimizer.restarts = as_int(key);
  else if (key == "lambda") c.optimizer.lambdas = parse_lambdas(v);
  else if (key == "lambda_reg") c.optimizer.lambda_reg = parse_double(key, v);
  else if (key == "adam_steps") c.optimizer.adam.steps = as_int(key);
  else if (key == "adam_lr") c.optimizer.adam.learning_rate = parse_double(key, v);
  else if (key == "max_iter") c.optimizer.lbfgs.max_iterations = as_int(key);
  else if (key == "lbfgs_memory") c.optimizer.lbfgs.memory = as_int(key);
  else if (key == "gtol") c.optimizer.lbfgs.gradient_tolerance = parse_double(key, v);
  else if (key == "weight_refresh") c.optimizer.weight_refresh = as_int(key);
  else if (key == "jobs") c.optimizer.jobs = as_int(key);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, v));
  else if (key == "resolution") c.resolution = as_int(key);
  else if (key == "timing") c.timing = detail::parse_bool(key, v);
  else if (key == "primary") c.primary = detail::parse_bool(key, v);
  else if (key == "out") c.out = v;
  else throw ArgumentError("config: unknown key '" + key + "'");
}

/// key = value lines; '#' starts a comment.
inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig c = {}) {
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ArgumentError("config line " + std::to_string(n) + ": expected key = value");
    apply_setting(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read config '" + path + "'");
  return parse_config(in);
}

/// Shortest decimal text that reads back to the same double.
inline std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "experiment = " << c.experiment_name() << "\nproblem = " << c.problem << "\nmethod = " << c.method
     << "\nrw_scale = " << shortest(c.rw_scale) << "\n";
  if (c.problem_options.gamma) os << "gamma = " << shortest(*c.problem_options.gamma) << "\n";
  if (c.problem_options.beta) os << "beta = " << shortest(*c.problem_options.beta) << "\n";
  os << "sampling = " << (c.sampler.strategy == SamplingStrategy::Sobol ? "sobol" : "random")
     << "\nn_int = " << c.sampler.n_int << "\nn_sb = " << c.sampler.n_sb << "\nn_tb = " << c.sampler.n_tb
     << "\nn_d = " << c.sampler.n_d << "\nhidden_layers = " << c.network.hidden_layers
     << "\nwidth = " << c.network.width << "\nrestarts = " << c.optimizer.restarts << "\nlambda = ";
  for (std::size_t i = 0; i < c.optimizer.lambdas.size(); ++i) os << (i ? "," : "") << shortest(c.optimizer.lambdas[i]);
  os << "\nlambda_reg = " << shortest(c.optimizer.lambda_reg) << "\nadam_steps = " << c.optimizer.adam.steps
     << "\nadam_lr = " << shortest(c.optimizer.adam.learning_rate) << "\nmax_iter = " << c.optimizer.lbfgs.max_iterations
     << "\nlbfgs_memory = " << c.optimizer.lbfgs.memory << "\ngtol = " << shortest(c.optimizer.lbfgs.gradient_tolerance)
     << "\nweight_refresh = " << c.optimizer.weight_refresh << "\nseed = " << c.seed
     << "\nresolution = " << c.resolution << "\nprimary = " << (c.primary ? "true" : "false") << "\n";
  return os.str();
}

struct ExperimentResult {
  ExperimentConfig config;
  std::uint64_t sampler_hash = 0;
  TrainingSet training_set;
  std::optional<TrainingReport> training;
  std::vector<std::string> divergence;
  std::optional<ErrorReport> error;
  std::optional<BoundDiagnostics> bound;
  std::vector<std::pair<double, double>> energy;  // (t, E(t)) for source-free EFK
  double gradient_check = 0.0;  // max relative FD error at the first iterate
  double runtime = 0.0;

  bool diverged() const { return !training.has_value(); }
};

/// Max relative error between the analytic loss gradient and central
/// differences over a few coordinates at restart 0's initial parameters.
inline double first_iterate_gradient_check(const ProblemSpec& p, const TrainingSet& set, const ExperimentConfig& c,
                                           int coordinates = 8) {
  NetworkConfig nc = c.network;
  nc.seed = restart_seed(c.network.seed, 0);
  const NetworkParams net = init_params(nc, p.domain.input_dim());
  LossModel model(p, net.widths(), set, c.scheme(), c.optimizer.lambdas.front(), c.optimizer.lambda_reg);
  std::vector<double> theta(net.flat().begin(), net.flat().end()), g(theta.size());
  model.freeze_weights(theta);
  model.evaluate(theta, g);
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  std::mt19937_64 rng(nc.seed);
  std::uniform_int_distribution<std::size_t> pick(0, theta.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < coordinates; ++i) {
    const std::size_t k = i == 0 ? theta.size() - 1 : pick(rng);
    const double h = 1e-5 * std::max(1.0, std::abs(theta[k]));
    std::vector<double> tp = theta, tm = theta;
    tp[k] += h;
    tm[k] -= h;
    const double fd = (model.evaluate(tp).total - model.evaluate(tm).total) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[k]) / std::max(std::abs(g[k]), 1e-4 * gmax));
  }
  return worst;
}

inline std::vector<double> energy_times() {
  std::vector<double> t;
  for (int k = 0; k <= 10; ++k) t.push_back(0.1 * k);
  return t;
}

inline ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressLog& log = {}) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult r;
  r.config = config;
  const ProblemSpec p = config.make();
  SamplerConfig sc = config.sampler;
  sc.seed = config.seed;
  r.training_set = build_training_set(sc, p);
  r.sampler_hash = training_set_hash(r.training_set);
  NetworkConfig net = config.network;
  net.seed = config.seed;
  r.config.network.seed = config.seed;
  r.gradient_check = first_iterate_gradient_check(p, r.training_set, r.config);
  try {
    r.training = ensemble_train(p, r.training_set, net, config.scheme(), config.optimizer, log);
  } catch (const DivergenceError& e) {
    r.divergence = e.diagnostics();
  }
  if (r.training) {
    const NetworkParams& best = r.training->params();
    if (p.exact) {
      r.error = generalization_error(p, best, config.resolution);
      r.bound = bound_diagnostics(p, best, r.training_set, QuadratureRates::for_strategy(sc.strategy));
    }
    if (p.is_efk() && p.domain.spatial_dim == 1 && !p.exact)
      for (double t : energy_times()) r.energy.emplace_back(t, efk_energy(best, t, 201, p.gamma));
  }
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------------------
// Reporting

inline std::string csv_header() {
  return "experiment,problem,method,primary,N_int,N_sb,N_tb,N_d,K-1,width,E_T,E_G,E_G_rel,bound,runtime,sampler_hash";
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline std::string csv_row(const ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  std::ostringstream os;
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.sampler_hash));
  const bool inverse = c.make().mode == Mode::Inverse;
  os << c.experiment_name() << ',' << c.problem << ',' << c.method << ',' << (c.primary ? 1 : 0) << ','
     << c.sampler.n_int << ',' << (inverse ? 0 : c.sampler.n_sb) << ',' << (inverse ? 0 : c.sampler.n_tb) << ','
     << (inverse ? c.sampler.n_d : 0) << ',' << c.network.hidden_layers << ',' << c.network.width << ',';
  os << (r.training ? sci(r.training->errors.total) : "diverged") << ',';
  os << (r.error ? sci(r.error->absolute) : "") << ',' << (r.error ? sci(r.error->relative) : "") << ',';
  os << (r.bound ? sci(r.bound->bound) : "") << ',';
  if (c.timing) os << sci(r.runtime);
  os << ',' << hash;
  return os.str();
}

inline nlohmann::json to_json(const LossBreakdown& L) {
  return {{"interior", L.interior}, {"interior_raw", L.interior_raw}, {"sb", L.sb},         {"tb", L.tb},
          {"data", L.data},         {"reg", L.reg},                   {"total", L.total},   {"lambda", L.lambda},
          {"training_error", L.training_error()}};
}

inline nlohmann::json to_json(const FamilyTerm& f) {
  return {{"training_error", f.training_error}, {"integral", f.integral}, {"quadrature", f.quadrature},
          {"count", f.count},                   {"rate", f.rate},         {"implied_constant", f.implied_constant}};
}

inline nlohmann::json to_json(const BoundDiagnostics& b) {
  return {{"theorem", b.theorem},
          {"interior", to_json(b.interior)},
          {"sb", to_json(b.sb)},
          {"tb", to_json(b.tb)},
          {"C1", b.C1},
          {"C2", b.C2},
          {"C3", b.C3},
          {"lipschitz", b.lipschitz},
          {"C_E", b.C_E},
          {"C_boundary", b.C_boundary},
          {"norm_exact", b.norm_exact},
          {"norm_network", b.norm_network},
          {"norm3_exact", b.norm3_exact},
          {"norm3_network", b.norm3_network},
          {"u_range", {b.u_min, b.u_max}},
          {"bound", b.bound},
          {"E_G", b.generalization_error},
          {"ratio", b.ratio},
          {"holds", b.holds},
          {"notes", b.notes}};
}

inline nlohmann::json report_json(const ExperimentResult& r) {
  using nlohmann::json;
  const ExperimentConfig& c = r.config;
  json j;
  j["experiment"] = c.experiment_name();
  j["problem"] = c.problem;
  j["method"] = c.method;
  j["rw_scale"] = c.rw_scale;
  j["seed"] = c.seed;
  j["config"] = format_config(c);
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.sampler_hash));
  j["sampler_hash"] = hash;
  j["gradient_check"] = r.gradient_check;
  if (c.timing) j["runtime_seconds"] = r.runtime;
  if (!r.training) {
    j["status"] = "diverged";
    j["diagnostics"] = r.divergence;
    return j;
  }
  j["status"] = "ok";
  const TrainingReport& t = *r.training;
  json runs = json::array();
  for (const auto& run : t.runs) {
    json e{{"restart", run.restart},
           {"seed", run.seed},
           {"lambda", run.lambda},
           {"diverged", run.diverged},
           {"adam_steps", run.adam_steps},
           {"lbfgs_iterations", run.lbfgs_iterations},
           {"evaluations", run.evaluations},
           {"status", to_string(run.status)}};
    if (run.diverged) e["error"] = run.error;
    else e["final"] = to_json(run.final);
    if (c.timing) e["seconds"] = run.seconds;
    runs.push_back(e);
  }
  j["runs"] = runs;
  j["selected"] = t.selected;
  j["selection_rule"] = t.selection_rule;
  j["training_errors"] = {{"interior", t.errors.interior}, {"sb", t.errors.sb}, {"tb", t.errors.tb},
                          {"data", t.errors.data},         {"total", t.errors.total}};
  if (r.error) {
    json slices = json::array();
    for (const auto& s : r.error->slices) slices.push_back({{"t", s.t}, {"l2", s.l2}});
    j["generalization"] = {{"E_G", r.error->absolute}, {"E_G_rel", r.error->relative}, {"sup", r.error->sup},
                           {"resolution", r.error->resolution}, {"slices", slices}};
  }
  if (r.bound) j["bound"] = to_json(*r.bound);
  if (!r.energy.empty()) {
    json e = json::array();
    for (const auto& [tt, v] : r.energy) e.push_back({tt, v});
    j["energy"] = e;
  }
  return j;
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
  out << text;
}

inline std::vector<double> linspace(int n, double hi) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = hi * i / (n - 1);
  return v;
}

// One line per point: coordinates, network value, and (when known) exact value and error.
inline void write_field(const std::filesystem::path& path, const std::string& header, const ProblemSpec& p,
                        const NetworkParams& net, const std::vector<Point>& pts, int dim) {
  std::ofstream out(path);
  out << header << (p.exact ? ",u,exact,error\n" : ",u\n");
  const Eigen::VectorXd u = evaluate(net, to_matrix(pts, net.input_dim()));
  char buf[160];
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point& q = pts[k];
    const double v = u(static_cast<Eigen::Index>(k));
    int n = dim == 1 ? std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.9e", q.t, q.x, v)
                     : std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.9e", q.t, q.x, q.y, v);
    out.write(buf, n);
    if (p.exact) {
      const double e = p.exact->value(q);
      n = std::snprintf(buf, sizeof buf, ",%.9e,%.9e", e, v - e);
      out.write(buf, n);
    }
    out << '\n';
  }
}

}  // namespace detail

/// Writes report.json, row.csv, training_set.csv, checkpoint files, loss
/// history and plot grids into `dir`. Partial artifacts on divergence.
inline void write_artifacts(const ExperimentResult& r, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  detail::write_text(dir / "report.json", report_json(r).dump(2) + "\n");
  detail::write_text(dir / "row.csv", csv_header() + "\n" + csv_row(r) + "\n");
  detail::write_text(dir / "config.txt", format_config(r.config));
  {
    std::ofstream out(dir / "training_set.csv");
    write_training_set_csv(r.training_set, out);
  }
  if (!r.training) return;
  const TrainingReport& t = *r.training;
  const NetworkParams& net = t.params();
  detail::write_text(dir / "checkpoint.json", to_json(net).dump() + "\n");
  write_binary(net, (dir / "checkpoint.bin").string());
  {
    std::ofstream out(dir / "history.csv");
    out << "restart,lambda,step,loss\n";
    char buf[96];
    for (const auto& run : t.runs)
      for (std::size_t s = 0; s < run.history.size(); ++s) {
        const int n = std::snprintf(buf, sizeof buf, "%d,%g,%zu,%.9e\n", run.restart, run.lambda, s, run.history[s]);
        out.write(buf, n);
      }
  }
  const ProblemSpec p = r.config.make();
  const int dim = p.domain.spatial_dim;
  const auto axis = detail::linspace(dim == 1 ? 201 : 101, 1.0);
  std::vector<Point> pts;
  // Solution slices; the 2D case is cut along y = 1/2.
  for (double tk : slice_times())
    for (double x : axis) pts.push_back({tk, x, dim == 2 ? 0.5 : 0.0});
  detail::write_field(dir / "slices.csv", dim == 1 ? "t,x" : "t,x,y", p, net, pts, dim);
  pts.clear();
  if (dim == 1) {
    const auto ax = detail::linspace(101, 1.0), at = detail::linspace(101, p.domain.T);
    for (double tt : at)
      for (double x : ax) pts.push_back({tt, x, 0.0});
    detail::write_field(dir / "field.csv", "t,x", p, net, pts, 1);
  } else {
    for (double y : axis)
      for (double x : axis) pts.push_back({p.domain.T, x, y});
    detail::write_field(dir / "contour.csv", "t,x,y", p, net, pts, 2);
  }
  if (!r.energy.empty()) {
    std::ofstream out(dir / "energy.csv");
    out << "t,energy\n";
    for (const auto& [tt, e] : r.energy) out << tt << ',' << sci(e) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Preset suite: each experiment's network, ensemble size and point counts.

struct Preset {
  std::string experiment, problem;
  int n_int, n_sb, n_tb, n_d, width, restarts;
  bool primary = true;
  std::optional<double> beta;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> p{
      {"burgess1d", "burgess1d", 2048, 512, 512, 0, 20, 10, true, {}},
      {"efk1d", "efk1d", 4096, 1024, 1024, 0, 20, 10, true, {}},
      {"efk1d-ic", "efk1d-ic-a", 2048, 512, 512, 0, 20, 12, true, {}},
      {"efk1d-ic", "efk1d-ic-b", 4096, 1024, 1024, 0, 20, 12, false, {}},
      {"efk2d", "efk2d", 8192, 2048, 2048, 0, 28, 10, true, {}},
      {"burgess1d-inv", "burgess1d-inv", 3072, 0, 0, 3072, 20, 10, true, {}},
      {"efk1d-inv", "efk1d-inv", 6144, 0, 0, 6144, 20, 10, true, {}},
      {"efk2d-inv", "efk2d-inv", 12288, 0, 0, 12288, 20, 10, true, 1.0},
      {"efk2d-inv", "efk2d-inv", 12288, 0, 0, 12288, 36, 10, false, 0.1},
      {"efk2d-inv", "efk2d-inv", 12288, 0, 0, 12288, 42, 4, false, 0.01},
  };
  return p;
}

inline const std::vector<std::string>& methods() {
  static const std::vector<std::string> m{"pinn", "rwa", "rwb"};
  return m;
}

/// Full-scale configuration: 4 hidden layers, lambda sweep, lambda_reg 0,
/// up to 5000 L-BFGS iterations.
inline ExperimentConfig preset_config(const Preset& s, const std::string& method) {
  ExperimentConfig c;
  c.experiment = s.experiment;
  c.problem = s.problem;
  c.method = method;
  c.sampler.n_int = s.n_int;
  c.sampler.n_sb = s.n_sb > 0 ? s.n_sb : c.sampler.n_sb;
  c.sampler.n_tb = s.n_tb > 0 ? s.n_tb : c.sampler.n_tb;
  c.sampler.n_d = s.n_d;
  c.network.hidden_layers = 4;
  c.network.width = s.width;
  c.optimizer.restarts = s.restarts;
  c.optimizer.lambdas = lambda_sweep();
  c.optimizer.lambda_reg = 0.0;
  c.optimizer.lbfgs.max_iterations = 5000;
  c.primary = s.primary;
  c.problem_options.beta = s.beta;
  return c;
}

/// File stem used for a preset, e.g. "efk2d-inv_beta0.1_rwb".
inline std::string preset_stem(const Preset& s, const std::string& method) {
  std::string stem = s.problem;
  if (s.beta && *s.beta != 1.0) {
    stem += "_beta" + shortest(*s.beta);
  }
  return stem + "_" + method;
}

struct SuiteOverrides {
  std::optional<int> restarts, max_iter, adam_steps, jobs;
  std::optional<std::vector<double>> lambdas;
  bool timing = true;
  bool extras = true;
};

/// Runs every preset and method; returns the consolidated CSV text.
/// Per-experiment failures are isolated and marked in the table.
inline std::string reproduce_all(const std::filesystem::path& out, std::uint64_t seed, const SuiteOverrides& o,
                                 const ProgressLog& log = {}) {
  std::ostringstream csv;
  csv << csv_header() << "\n";
  for (const Preset& s : presets()) {
    if (!s.primary && !o.extras) continue;
    for (const std::string& m : methods()) {
      ExperimentConfig c = preset_config(s, m);
      c.seed = seed;
      c.timing = o.timing;
      if (o.restarts) c.optimizer.restarts = *o.restarts;
      if (o.max_iter) c.optimizer.lbfgs.max_iterations = *o.max_iter;
      if (o.adam_steps) c.optimizer.adam.steps = *o.adam_steps;
      if (o.jobs) c.optimizer.jobs = *o.jobs;
      if (o.lambdas) c.optimizer.lambdas = *o.lambdas;
      const std::string stem = preset_stem(s, m);
      if (log) log("== " + stem);
      try {
        const ExperimentResult r = run_experiment(c, log);
        write_artifacts(r, out / stem);
        csv << csv_row(r) << "\n";
      } catch (const std::exception& e) {
        if (log) log(stem + " failed: " + e.what());
        csv << c.experiment_name() << ',' << c.problem << ',' << m << ',' << (c.primary ? 1 : 0)
            << ",,,,,,,failed,,,,,\n";
      }
    }
  }
  std::filesystem::create_directories(out);
  detail::write_text(out / "summary.csv", csv.str());
  return csv.str();
}

}  // namespace rwpinn
