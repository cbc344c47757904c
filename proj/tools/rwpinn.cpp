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


// Command-line runner.
//
//   rwpinn run --config configs/burgess1d_rwb.cfg --out results
//   rwpinn run --problem efk1d --method rwa --lambda sweep --restarts 2
//   rwpinn reproduce --out results --max-iter 2000 --restarts 2
//   rwpinn presets configs
//
// Exit codes: 0 success, 2 usage error, 3 training diverged, 1 otherwise.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rwpinn/experiment.hpp"

namespace fs = std::filesystem;
using namespace rwpinn;

namespace {

constexpr int kUsage = 2;
constexpr int kDiverged = 3;

struct RunFlags {
  std::string config, problem, method, lambda, out = "results";
  std::optional<double> rw_scale, gamma, beta;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs, restarts, max_iter, adam_steps, n_int, n_sb, n_tb, n_d, width;
  bool no_timing = false;
};

struct SuiteFlags {
  std::string out = "results";
  std::uint64_t seed = 0;
  std::string lambda;
  std::optional<int> jobs, restarts, max_iter, adam_steps;
  bool no_timing = false, no_extras = false;
};

std::string output_dir(const std::string& flag) {
  const char* env = std::getenv("RWPINN_OUT");
  return env && *env ? env : flag;
}

void log_line(const std::string& s) {
  static std::mutex m;
  std::lock_guard lock(m);
  std::cerr << s << std::endl;
}

int run(const RunFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (!f.problem.empty()) c.problem = f.problem;
  if (!f.method.empty()) c.method = f.method;
  if (!f.lambda.empty()) c.optimizer.lambdas = parse_lambdas(f.lambda);
  if (f.rw_scale) c.rw_scale = *f.rw_scale;
  if (f.gamma) c.problem_options.gamma = *f.gamma;
  if (f.beta) c.problem_options.beta = *f.beta;
  if (f.seed) c.seed = *f.seed;
  if (f.jobs) c.optimizer.jobs = *f.jobs;
  if (f.restarts) c.optimizer.restarts = *f.restarts;
  if (f.max_iter) c.optimizer.lbfgs.max_iterations = *f.max_iter;
  if (f.adam_steps) c.optimizer.adam.steps = *f.adam_steps;
  if (f.n_int) c.sampler.n_int = *f.n_int;
  if (f.n_sb) c.sampler.n_sb = *f.n_sb;
  if (f.n_tb) c.sampler.n_tb = *f.n_tb;
  if (f.n_d) c.sampler.n_d = *f.n_d;
  if (f.width) c.network.width = *f.width;
  if (f.no_timing) c.timing = false;
  if (c.make().mode == Mode::Inverse && c.sampler.n_d == 0) c.sampler.n_d = c.sampler.n_int;
  c.validate();

  const fs::path out = output_dir(f.out);
  const ExperimentResult r = run_experiment(c, log_line);
  write_artifacts(r, out / (c.problem + "_" + c.method));
  const fs::path table = out / "results.csv";
  const bool fresh = !fs::exists(table);
  std::ofstream csv(table, std::ios::app);
  if (fresh) csv << csv_header() << "\n";
  csv << csv_row(r) << "\n";
  std::cout << csv_header() << "\n" << csv_row(r) << std::endl;
  if (r.diverged()) {
    for (const auto& d : r.divergence) std::cerr << "diverged: " << d << "\n";
    return kDiverged;
  }
  return 0;
}

int reproduce(const SuiteFlags& f) {
  SuiteOverrides o;
  o.restarts = f.restarts;
  o.max_iter = f.max_iter;
  o.adam_steps = f.adam_steps;
  o.jobs = f.jobs;
  if (!f.lambda.empty()) o.lambdas = parse_lambdas(f.lambda);
  o.timing = !f.no_timing;
  o.extras = !f.no_extras;
  std::cout << reproduce_all(output_dir(f.out), f.seed, o, log_line);
  return 0;
}

int write_presets(const std::string& dir) {
  fs::create_directories(dir);
  for (const Preset& s : presets())
    for (const std::string& m : methods()) {
      std::ofstream out(fs::path(dir) / (preset_stem(s, m) + ".cfg"));
      out << "# " << s.experiment << " (" << m << ")\n" << format_config(preset_config(s, m));
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual-weighted physics-informed network trainer"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run_cmd = app.add_subcommand("run", "Train and evaluate one experiment");
  run_cmd->add_option("--config", rf.config, "key = value config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--problem", rf.problem, "problem name");
  run_cmd->add_option("--method", rf.method, "pinn | rwa | rwb");
  run_cmd->add_option("--rw-scale", rf.rw_scale, "weight scale in (0, 1]");
  run_cmd->add_option("--lambda", rf.lambda, "interior multiplier, a list, or 'sweep'");
  run_cmd->add_option("--gamma", rf.gamma, "EFK coefficient");
  run_cmd->add_option("--beta", rf.beta, "Gaussian width (efk2d-inv)");
  run_cmd->add_option("--seed", rf.seed, "base seed");
  run_cmd->add_option("--jobs", rf.jobs, "parallel restarts");
  run_cmd->add_option("--restarts", rf.restarts, "ensemble size per lambda");
  run_cmd->add_option("--max-iter", rf.max_iter, "L-BFGS iteration cap");
  run_cmd->add_option("--adam-steps", rf.adam_steps, "Adam warm-up steps");
  run_cmd->add_option("--n-int", rf.n_int);
  run_cmd->add_option("--n-sb", rf.n_sb);
  run_cmd->add_option("--n-tb", rf.n_tb);
  run_cmd->add_option("--n-d", rf.n_d);
  run_cmd->add_option("--width", rf.width, "hidden layer width");
  run_cmd->add_option("--out", rf.out, "output directory (RWPINN_OUT overrides)");
  run_cmd->add_flag("--no-timing", rf.no_timing, "leave runtime columns blank");

  SuiteFlags sf;
  auto* rep_cmd = app.add_subcommand("reproduce", "Run every preset and write summary.csv");
  rep_cmd->add_option("--out", sf.out, "output directory (RWPINN_OUT overrides)");
  rep_cmd->add_option("--seed", sf.seed, "base seed");
  rep_cmd->add_option("--lambda", sf.lambda, "override the lambda sweep");
  rep_cmd->add_option("--jobs", sf.jobs, "parallel restarts");
  rep_cmd->add_option("--restarts", sf.restarts, "override ensemble sizes");
  rep_cmd->add_option("--max-iter", sf.max_iter, "override the L-BFGS cap");
  rep_cmd->add_option("--adam-steps", sf.adam_steps, "override Adam warm-up steps");
  rep_cmd->add_flag("--no-timing", sf.no_timing, "leave runtime columns blank");
  rep_cmd->add_flag("--no-extras", sf.no_extras, "primary rows only");

  std::string preset_dir = "configs";
  auto* pre_cmd = app.add_subcommand("presets", "Write the preset config files");
  pre_cmd->add_option("dir", preset_dir, "target directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  try {
    if (*run_cmd) return run(rf);
    if (*rep_cmd) return reproduce(sf);
    return write_presets(preset_dir);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
