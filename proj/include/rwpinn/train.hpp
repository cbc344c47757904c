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

// Ensemble training: n restarts (times each lambda), Adam warm-up then
// L-BFGS, selection of the member with the smallest training loss.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rwpinn/loss.hpp"
#include "rwpinn/network.hpp"
#include "rwpinn/optim.hpp"
#include "rwpinn/problems.hpp"
#include "rwpinn/sampling.hpp"
#include "rwpinn/weighting.hpp"

namespace rwpinn {

struct OptimizerConfig {
  AdamConfig adam;
  LbfgsConfig lbfgs;
  int restarts = 10;
  std::vector<double> lambdas{1.0};
  double lambda_reg = 0.0;
  int jobs = 1;
  /// L-BFGS iterations between weight refreshes for RWa/RWb.
  int weight_refresh = 100;

  void validate() const {
    adam.validate();
    lbfgs.validate();
    if (restarts < 1) throw ArgumentError("optimizer: restarts must be positive");
    if (lambdas.empty()) throw ArgumentError("optimizer: need at least one lambda");
    for (double l : lambdas)
      if (!(l > 0.0)) throw ArgumentError("optimizer: lambda must be positive");
    if (!(lambda_reg >= 0.0)) throw ArgumentError("optimizer: lambda_reg must be nonnegative");
    if (jobs < 1) throw ArgumentError("optimizer: jobs must be positive");
    if (weight_refresh < 1) throw ArgumentError("optimizer: weight_refresh must be positive");
  }
};

/// The lambda grid used when sweeping.
inline std::vector<double> lambda_sweep() { return {0.1, 1.0, 10.0}; }

/// splitmix64 finaliser.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Initialisation seed of restart k.
inline std::uint64_t restart_seed(std::uint64_t base, int k) { return mix_seed(base ^ static_cast<std::uint64_t>(k)); }

struct RestartResult {
  int restart = 0;
  std::uint64_t seed = 0;
  double lambda = 1.0;
  bool diverged = false;
  std::string error;
  LossBreakdown final;
  int adam_steps = 0;
  int lbfgs_iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::MaxIterations;
  std::vector<double> history;  // Adam losses, then L-BFGS accepted losses
  NetworkParams params;
  double seconds = 0.0;
};

/// Root-sum-of-squares training errors of one member.
struct TrainingErrors {
  double interior = 0.0, sb = 0.0, tb = 0.0, data = 0.0, total = 0.0;

  static TrainingErrors from(const LossBreakdown& L) {
    return {std::sqrt(L.interior), std::sqrt(L.sb), std::sqrt(L.tb), std::sqrt(L.data), L.training_error()};
  }
};

struct TrainingReport {
  std::vector<RestartResult> runs;
  std::size_t selected = 0;
  /// "loss" for a single lambda; "training_error" across a lambda sweep.
  std::string selection_rule;
  TrainingErrors errors;
  double wall_seconds = 0.0;

  const RestartResult& best() const { return runs.at(selected); }
  const NetworkParams& params() const { return best().params; }
};

using ProgressLog = std::function<void(const std::string&)>;

/// One restart: Adam warm-up then L-BFGS on a fixed loss model.
inline RestartResult train_single(LossModel& model, const NetworkConfig& net, const OptimizerConfig& opt,
                                  int restart, std::uint64_t seed) {
  RestartResult r;
  r.restart = restart;
  r.seed = seed;
  r.lambda = model.lambda();
  const auto t0 = std::chrono::steady_clock::now();
  NetworkConfig cfg = net;
  cfg.seed = seed;
  NetworkParams params = init_params(cfg, model.problem().domain.input_dim());
  const Objective f = [&model](std::span<const double> x, std::span<double> g) { return model.evaluate(x, g).total; };
  try {
    std::vector<double> x(params.flat().begin(), params.flat().end());
    if (opt.adam.steps > 0) {
      auto a = adam_minimize(f, std::move(x), opt.adam);
      r.adam_steps = a.iterations;
      r.evaluations += a.evaluations;
      r.history = std::move(a.history);
      x = std::move(a.x);
    }
    if (model.scheme().kind == WeightKind::None) {
      auto l = lbfgs_minimize(f, std::move(x), opt.lbfgs);
      r.lbfgs_iterations = l.iterations;
      r.evaluations += l.evaluations;
      r.status = l.status;
      r.history.insert(r.history.end(), l.history.begin() + (r.history.empty() ? 0 : 1), l.history.end());
      x = std::move(l.x);
    } else {
      // Weights frozen per block so the line search sees a consistent
      // objective; stationary points match the detached gradient. The
      // curvature pairs survive each refresh.
      LbfgsConfig block = opt.lbfgs;
      LbfgsMemory memory;
      int remaining = opt.lbfgs.max_iterations;
      r.status = LbfgsStatus::MaxIterations;
      while (remaining > 0) {
        model.freeze_weights(x);
        block.max_iterations = std::min(opt.weight_refresh, remaining);
        auto l = lbfgs_minimize(f, std::move(x), block, {}, &memory);
        model.thaw_weights();
        x = std::move(l.x);
        remaining -= l.iterations;
        r.lbfgs_iterations += l.iterations;
        r.evaluations += l.evaluations;
        r.history.insert(r.history.end(), l.history.begin() + (r.history.empty() ? 0 : 1), l.history.end());
        if (l.status != LbfgsStatus::MaxIterations) r.status = l.status;
        if (l.iterations == 0 || (l.status != LbfgsStatus::MaxIterations && l.iterations < 2)) break;
        if (remaining == 0) r.status = LbfgsStatus::MaxIterations;
      }
    }
    params = NetworkParams(params.widths(), std::move(x));
    r.final = model.evaluate(params.flat());
  } catch (const NumericError& e) {
    model.thaw_weights();
    r.diverged = true;
    r.error = e.what();
  }
  r.params = std::move(params);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline TrainingReport ensemble_train(const ProblemSpec& problem, const TrainingSet& set, const NetworkConfig& net,
                                     const WeightScheme& scheme, const OptimizerConfig& opt,
                                     const ProgressLog& log = {}) {
  opt.validate();
  scheme.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> widths = layer_widths(net, problem.domain.input_dim());

  struct Job {
    int restart;
    double lambda;
  };
  std::vector<Job> jobs;
  for (double lambda : opt.lambdas)
    for (int k = 0; k < opt.restarts; ++k) jobs.push_back({k, lambda});

  TrainingReport report;
  report.runs.resize(jobs.size());
  std::mutex log_mutex;
  std::size_t next = 0;
  std::mutex next_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(next_mutex);
        if (next >= jobs.size()) return;
        i = next++;
      }
      LossModel model(problem, widths, set, scheme, jobs[i].lambda, opt.lambda_reg);
      report.runs[i] = train_single(model, net, opt, jobs[i].restart, restart_seed(net.seed, jobs[i].restart));
      if (log) {
        const RestartResult& r = report.runs[i];
        std::lock_guard lock(log_mutex);
        log(problem.name + " " + method_name(scheme.kind) + " lambda=" + std::to_string(r.lambda) +
            " restart " + std::to_string(r.restart) +
            (r.diverged ? " diverged: " + r.error
                        : " loss=" + std::to_string(r.final.total) + " iters=" + std::to_string(r.lbfgs_iterations) +
                              " (" + to_string(r.status) + ")"));
      }
    }
  };
  const int threads = std::min<int>(opt.jobs, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  report.selection_rule = opt.lambdas.size() > 1 ? "training_error" : "loss";
  auto key = [&](const RestartResult& r) {
    return opt.lambdas.size() > 1 ? r.final.training_error() : r.final.total;
  };
  bool any = false;
  std::vector<std::string> diagnostics;
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const RestartResult& r = report.runs[i];
    if (r.diverged) {
      diagnostics.push_back("restart " + std::to_string(r.restart) + " lambda " + std::to_string(r.lambda) + ": " +
                            r.error);
      continue;
    }
    if (!any || key(r) < key(report.runs[report.selected])) report.selected = i;
    any = true;
  }
  if (!any) throw DivergenceError(diagnostics);
  report.errors = TrainingErrors::from(report.best().final);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline TrainingReport ensemble_train(const ProblemSpec& problem, const SamplerConfig& sampler,
                                     const NetworkConfig& net, const WeightScheme& scheme,
                                     const OptimizerConfig& opt, const ProgressLog& log = {}) {
  return ensemble_train(problem, build_training_set(sampler, problem), net, scheme, opt, log);
}

}  // namespace rwpinn
