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


#include <set>

#include <gtest/gtest.h>

#include "rwpinn/train.hpp"

namespace rwpinn {
namespace {

struct Fixture {
  ProblemSpec problem = make_problem("burgess1d");
  TrainingSet set;
  NetworkConfig net;
  OptimizerConfig opt;

  Fixture() {
    SamplerConfig c;
    c.n_int = 160;
    c.n_sb = c.n_tb = 80;
    set = build_training_set(c, problem);
    net.hidden_layers = 2;
    net.width = 6;
    net.seed = 42;
    opt.adam.steps = 20;
    opt.lbfgs.max_iterations = 40;
    opt.restarts = 2;
  }
};

TEST(Train, RestartSeedsAreDistinctAndReproducible) {
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 10; ++k) seen.insert(restart_seed(7, k));
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_EQ(restart_seed(7, 3), restart_seed(7, 3));
  EXPECT_NE(restart_seed(7, 3), restart_seed(8, 3));
}

TEST(Train, SingleRestartLowersTheLoss) {
  Fixture f;
  LossModel model(f.problem, layer_widths(f.net, 2), f.set, WeightScheme{}, 1.0);
  const NetworkParams start = [&] {
    NetworkConfig c = f.net;
    c.seed = 99;
    return init_params(c, 2);
  }();
  const double before = model.evaluate(start.flat()).total;
  const RestartResult r = train_single(model, f.net, f.opt, 0, 99);
  ASSERT_FALSE(r.diverged) << r.error;
  EXPECT_LT(r.final.total, 0.1 * before);
  EXPECT_EQ(r.adam_steps, 20);
  EXPECT_LE(r.lbfgs_iterations, 40);
  EXPECT_EQ(r.history.size(), static_cast<std::size_t>(r.adam_steps + r.lbfgs_iterations + 1));
}

TEST(Train, WeightedRestartRefreshesWeightsInBlocks) {
  Fixture f;
  f.opt.weight_refresh = 10;
  LossModel model(f.problem, layer_widths(f.net, 2), f.set, WeightScheme{WeightKind::RWb, 1.0}, 1.0);
  const RestartResult r = train_single(model, f.net, f.opt, 0, 5);
  ASSERT_FALSE(r.diverged);
  EXPECT_FALSE(model.weights_frozen());
  EXPECT_GT(r.lbfgs_iterations, 10);
  EXPECT_EQ(r.final.total, model.evaluate(r.params.flat()).total);
}

TEST(Train, EnsembleSelectsTheSmallestLoss) {
  Fixture f;
  f.opt.restarts = 3;
  const TrainingReport rep = ensemble_train(f.problem, f.set, f.net, WeightScheme{}, f.opt);
  ASSERT_EQ(rep.runs.size(), 3u);
  EXPECT_EQ(rep.selection_rule, "loss");
  for (const auto& r : rep.runs) EXPECT_LE(rep.best().final.total, r.final.total);
  EXPECT_EQ(rep.errors.total, rep.best().final.training_error());
  EXPECT_NEAR(rep.errors.interior, std::sqrt(rep.best().final.interior), 1e-15);
}

TEST(Train, LambdaSweepSelectsTheSmallestTrainingError) {
  Fixture f;
  f.opt.lambdas = lambda_sweep();
  const TrainingReport rep = ensemble_train(f.problem, f.set, f.net, WeightScheme{}, f.opt);
  ASSERT_EQ(rep.runs.size(), 6u);
  EXPECT_EQ(rep.selection_rule, "training_error");
  for (const auto& r : rep.runs) EXPECT_LE(rep.best().final.training_error(), r.final.training_error());
  // initialisation is shared across lambda values
  EXPECT_EQ(rep.runs[0].seed, rep.runs[2].seed);
}

TEST(Train, ParallelJobsMatchSerialResults) {
  Fixture f;
  const TrainingReport serial = ensemble_train(f.problem, f.set, f.net, WeightScheme{}, f.opt);
  f.opt.jobs = 2;
  const TrainingReport parallel = ensemble_train(f.problem, f.set, f.net, WeightScheme{}, f.opt);
  ASSERT_EQ(serial.runs.size(), parallel.runs.size());
  for (std::size_t i = 0; i < serial.runs.size(); ++i)
    EXPECT_EQ(serial.runs[i].final.total, parallel.runs[i].final.total);
}

TEST(Train, AllRestartsDivergingRaisesWithDiagnostics) {
  Fixture f;
  f.opt.adam.learning_rate = 1e4;
  f.opt.adam.steps = 200;
  try {
    ensemble_train(f.problem, f.set, f.net, WeightScheme{}, f.opt);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.diagnostics().size(), 2u);
  }
}

TEST(Train, ConfigValidation) {
  OptimizerConfig o;
  o.restarts = 0;
  EXPECT_THROW(o.validate(), ArgumentError);
  o = {};
  o.lambdas = {};
  EXPECT_THROW(o.validate(), ArgumentError);
  o = {};
  o.lambdas = {0.0};
  EXPECT_THROW(o.validate(), ArgumentError);
  o = {};
  o.lbfgs.max_iterations = 5001;
  EXPECT_THROW(o.validate(), ArgumentError);
}

}  // namespace
}  // namespace rwpinn
