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


#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "rwpinn/experiment.hpp"

namespace rwpinn {
namespace {

namespace fs = std::filesystem;

ExperimentConfig tiny(const std::string& problem, const std::string& method) {
  ExperimentConfig c;
  c.problem = problem;
  c.method = method;
  c.sampler.n_int = 160;
  c.sampler.n_sb = c.sampler.n_tb = 80;
  if (make_problem(problem).mode == Mode::Inverse) c.sampler.n_d = 160;
  c.network.hidden_layers = 2;
  c.network.width = 6;
  c.optimizer.restarts = 1;
  c.optimizer.adam.steps = 5;
  c.optimizer.lbfgs.max_iterations = 15;
  c.resolution = 21;
  c.timing = false;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rwpinn_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Config, ParsesKeyValueLinesWithComments) {
  std::istringstream in(
      "# comment\nproblem = efk1d\nmethod=rwb  # trailing\nrw_scale = 0.5\nlambda = sweep\n\nn_int = 4096\n"
      "width = 28\nmax_iter = 100\nsampling = random\ngamma = 0.002\n");
  const ExperimentConfig c = parse_config(in);
  EXPECT_EQ(c.problem, "efk1d");
  EXPECT_EQ(c.method, "rwb");
  EXPECT_EQ(c.rw_scale, 0.5);
  EXPECT_EQ(c.optimizer.lambdas, lambda_sweep());
  EXPECT_EQ(c.sampler.n_int, 4096);
  EXPECT_EQ(c.network.width, 28);
  EXPECT_EQ(c.optimizer.lbfgs.max_iterations, 100);
  EXPECT_EQ(c.sampler.strategy, SamplingStrategy::Random);
  EXPECT_EQ(c.make().gamma, 0.002);
}

TEST(Config, RejectsMalformedInput) {
  std::istringstream unknown("colour = blue\n");
  EXPECT_THROW(parse_config(unknown), ArgumentError);
  std::istringstream no_eq("problem efk1d\n");
  EXPECT_THROW(parse_config(no_eq), ArgumentError);
  std::istringstream bad_number("n_int = many\n");
  EXPECT_THROW(parse_config(bad_number), ArgumentError);
  EXPECT_THROW(load_config("/nonexistent/file.cfg"), ArgumentError);
  ExperimentConfig c;
  c.method = "rwc";
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.problem = "wave";
  EXPECT_THROW(c.validate(), ArgumentError);
}

TEST(Config, FormatRoundTrips) {
  ExperimentConfig c = preset_config(presets().back(), "rwa");
  c.seed = 17;
  std::istringstream in(format_config(c));
  const ExperimentConfig d = parse_config(in);
  EXPECT_EQ(format_config(d), format_config(c));
}

TEST(Presets, ShippedConfigFilesMatchTheBuiltInSuite) {
  int files = 0;
  for (const Preset& s : presets())
    for (const std::string& m : methods()) {
      const fs::path path = fs::path(RWPINN_CONFIG_DIR) / (preset_stem(s, m) + ".cfg");
      ASSERT_TRUE(fs::exists(path)) << path;
      EXPECT_EQ(format_config(load_config(path.string())), format_config(preset_config(s, m))) << path;
      ++files;
    }
  EXPECT_EQ(files, 30);
}

TEST(Presets, TableScaleSettings) {
  int primary = 0;
  std::set<std::string> experiments;
  for (const Preset& s : presets()) {
    if (!s.primary) continue;
    primary += static_cast<int>(methods().size());
    experiments.insert(s.experiment);
    const ExperimentConfig c = preset_config(s, "pinn");
    EXPECT_EQ(c.network.hidden_layers, 4);
    EXPECT_EQ(c.optimizer.lambdas, lambda_sweep());
    EXPECT_EQ(c.optimizer.lambda_reg, 0.0);
    EXPECT_LE(c.optimizer.lbfgs.max_iterations, 5000);
    EXPECT_NO_THROW(c.validate());
  }
  EXPECT_EQ(experiments.size(), 7u);
  EXPECT_EQ(primary, 21);
  const ExperimentConfig inv2 = preset_config(presets()[7], "pinn");
  EXPECT_EQ(inv2.sampler.n_d, 12288);
  EXPECT_EQ(inv2.network.width, 20);
  EXPECT_EQ(inv2.make().beta, 1.0);
  EXPECT_EQ(preset_config(presets()[4], "rwb").network.width, 28);
}

TEST(Experiment, RunWritesEveryArtifact) {
  const fs::path dir = scratch("artifacts");
  const ExperimentResult r = run_experiment(tiny("burgess1d", "rwb"));
  ASSERT_FALSE(r.diverged());
  ASSERT_TRUE(r.error.has_value());
  ASSERT_TRUE(r.bound.has_value());
  EXPECT_LE(r.gradient_check, 1e-5);
  write_artifacts(r, dir);
  for (const char* f : {"report.json", "row.csv", "config.txt", "training_set.csv", "checkpoint.json",
                        "checkpoint.bin", "history.csv", "slices.csv", "field.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto j = nlohmann::json::parse(std::ifstream(dir / "report.json"));
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["runs"].size(), 1u);
  EXPECT_FALSE(j.contains("runtime_seconds"));
  EXPECT_EQ(params_from_json(nlohmann::json::parse(std::ifstream(dir / "checkpoint.json"))).flat().size(),
            r.training->params().size());
  fs::remove_all(dir);
}

TEST(Experiment, TwoDimensionalRunWritesContourGrid) {
  const fs::path dir = scratch("contour");
  const ExperimentResult r = run_experiment(tiny("efk2d", "pinn"));
  write_artifacts(r, dir);
  EXPECT_TRUE(fs::exists(dir / "contour.csv"));
  std::ifstream in(dir / "contour.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x,y,u,exact,error");
  fs::remove_all(dir);
}

TEST(Experiment, SourceFreeRunRecordsEnergyAndNoError) {
  const ExperimentResult r = run_experiment(tiny("efk1d-ic-a", "pinn"));
  EXPECT_FALSE(r.error.has_value());
  EXPECT_EQ(r.energy.size(), 11u);
  const std::string row = csv_row(r);
  EXPECT_NE(row.find(",,,,"), std::string::npos) << row;
}

TEST(Experiment, RowsAreDeterministicAndShareTheSamplerHash) {
  const std::string a = csv_row(run_experiment(tiny("burgess1d", "pinn")));
  const std::string b = csv_row(run_experiment(tiny("burgess1d", "pinn")));
  const std::string c = csv_row(run_experiment(tiny("burgess1d", "rwa")));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a.substr(a.rfind(',')), c.substr(c.rfind(',')));
  const std::string header = csv_header();
  EXPECT_EQ(std::count(a.begin(), a.end(), ','), std::count(header.begin(), header.end(), ','));
}

TEST(Experiment, InverseRowReportsDataCount) {
  const std::string row = csv_row(run_experiment(tiny("burgess1d-inv", "pinn")));
  EXPECT_EQ(row.rfind("burgess1d-inv,burgess1d-inv,pinn,1,160,0,0,160,2,6,", 0), 0u) << row;
}

TEST(Experiment, DivergenceLeavesPartialArtifacts) {
  ExperimentConfig c = tiny("burgess1d", "pinn");
  c.optimizer.adam.learning_rate = 1e4;
  c.optimizer.adam.steps = 200;
  const ExperimentResult r = run_experiment(c);
  ASSERT_TRUE(r.diverged());
  EXPECT_FALSE(r.divergence.empty());
  const fs::path dir = scratch("diverged");
  write_artifacts(r, dir);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_FALSE(fs::exists(dir / "checkpoint.json"));
  EXPECT_NE(csv_row(r).find("diverged"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Experiment, LambdaParsing) {
  EXPECT_EQ(parse_lambdas("sweep"), (std::vector<double>{0.1, 1.0, 10.0}));
  EXPECT_EQ(parse_lambdas("2, 3"), (std::vector<double>{2.0, 3.0}));
  EXPECT_THROW(parse_lambdas("fast"), ArgumentError);
}

}  // namespace
}  // namespace rwpinn
