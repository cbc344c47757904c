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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rwpinn/network.hpp"

namespace rwpinn {
namespace {

TEST(NetworkInit, SameSeedSameParameters) {
  const NetworkConfig c{4, 20, 42};
  EXPECT_EQ(init_params(c, 2), init_params(c, 2));
}

TEST(NetworkInit, DifferentSeedsDiffer) {
  EXPECT_FALSE(init_params({4, 20, 1}, 2) == init_params({4, 20, 2}, 2));
}

TEST(NetworkInit, XavierBoundsAndZeroBiases) {
  const auto p = init_params({3, 17, 5}, 3);
  for (int k = 0; k < p.num_layers(); ++k) {
    const double bound = std::sqrt(6.0 / (p.widths()[k] + p.widths()[k + 1]));
    EXPECT_LE(p.weight(k).cwiseAbs().maxCoeff(), bound);
    EXPECT_GT(p.weight(k).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(p.bias(k).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(NetworkShape, ParameterCountForTwoInputsFourByTwenty) {
  const auto w = layer_widths({4, 20, 0}, 2);
  EXPECT_EQ(parameter_count(w), 1341u);
  EXPECT_EQ(init_params({4, 20, 0}, 2).size(), 1341u);
}

TEST(NetworkShape, ParameterCountMatchesLayerSum) {
  for (int in : {2, 3})
    for (int h : {1, 2, 4})
      for (int width : {1, 7, 20, 28}) {
        const auto p = init_params({h, width, 0}, in);
        std::size_t n = 0;
        for (int k = 0; k < p.num_layers(); ++k) n += p.weight(k).size() + p.bias(k).size();
        EXPECT_EQ(p.size(), n);
        EXPECT_EQ(p.size(), static_cast<std::size_t>((in + 1) * width + (h - 1) * (width + 1) * width + width + 1));
      }
}

TEST(NetworkShape, InvalidConfigsRejected) {
  EXPECT_THROW(layer_widths({0, 20, 0}, 2), ArgumentError);
  EXPECT_THROW(layer_widths({2, 0, 0}, 2), ArgumentError);
  EXPECT_THROW(NetworkParams({2, 3, 2}), ArgumentError);
  EXPECT_THROW(NetworkParams({2, 3, 1}, std::vector<double>(5)), ArgumentError);
}

TEST(NetworkForward, ZeroParametersGiveZeroOutputAndDerivatives) {
  const NetworkParams p({2, 5, 5, 1});
  const auto basis = TaylorBasis::box({1, 4});
  const std::vector<Taylor<double>> in{taylor_lift(basis, 0.3, kT), taylor_lift(basis, 0.6, kX)};
  const auto u = forward(p, in);
  for (std::size_t k = 0; k < basis->size(); ++k) EXPECT_EQ(u[k], 0.0);
}

TEST(NetworkForward, OneHiddenUnitChainRule) {
  // u = c tanh(a t + b x + d) + e
  const double a = 0.4, b = -1.1, d = 0.2, c = 1.7, e = -0.3;
  const NetworkParams p({2, 1, 1}, {a, b, d, c, e});
  const double t0 = 0.25, x0 = 0.75;
  const auto basis = TaylorBasis::box({1, 2});
  const std::vector<Taylor<double>> in{taylor_lift(basis, t0, kT), taylor_lift(basis, x0, kX)};
  const auto u = forward(p, in);
  const double z = a * t0 + b * x0 + d, th = std::tanh(z), s = 1 - th * th;
  EXPECT_NEAR(u.value(), c * th + e, 1e-15);
  EXPECT_NEAR(extract_derivative(u, {0, 1, 0}), c * b * s, 1e-15);
  EXPECT_NEAR(extract_derivative(u, {1, 0, 0}), c * a * s, 1e-15);
  EXPECT_NEAR(extract_derivative(u, {0, 2, 0}), c * b * b * (-2 * th * s), 1e-14);
  EXPECT_NEAR(extract_derivative(u, {1, 1, 0}), c * a * b * (-2 * th * s), 1e-14);
}

TEST(NetworkForward, PlainEvaluationMatchesZerothCoefficient) {
  const auto p = init_params({4, 20, 3}, 3);
  const auto basis = TaylorBasis::box({1, 4, 4});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> x{u(rng), u(rng), u(rng)};
    const std::vector<Taylor<double>> in{taylor_lift(basis, x[0], kT), taylor_lift(basis, x[1], kX),
                                         taylor_lift(basis, x[2], kY)};
    EXPECT_NEAR(forward(p, std::span<const double>(x)), forward(p, in).value(), 1e-14);
  }
}

TEST(NetworkForward, DimensionMismatchThrows) {
  const auto p = init_params({2, 4, 0}, 2);
  const auto basis = TaylorBasis::box({1, 2});
  const std::vector<Taylor<double>> in{taylor_lift(basis, 0.1, kT)};
  EXPECT_THROW(forward(p, in), ArgumentError);
  const std::vector<double> x{0.1, 0.2, 0.3};
  EXPECT_THROW(forward(p, std::span<const double>(x)), ArgumentError);
}

TEST(NetworkForward, EvaluationIsPure) {
  const auto p = init_params({2, 8, 4}, 2);
  const auto copy = p;
  Eigen::MatrixXd pts = Eigen::MatrixXd::Random(2, 16);
  const Eigen::VectorXd a = evaluate(p, pts), b = evaluate(p, pts);
  EXPECT_EQ(a, b);
  EXPECT_EQ(p, copy);
}

TEST(NetworkSerialization, JsonAndBinaryRoundTrip) {
  const auto p = init_params({3, 6, 9}, 3);
  EXPECT_EQ(params_from_json(nlohmann::json::parse(to_json(p).dump())), p);
  const auto path = std::filesystem::temp_directory_path() / "rwpinn_params_roundtrip.bin";
  write_binary(p, path.string());
  EXPECT_EQ(read_binary(path.string()), p);
  std::filesystem::remove(path);
}

TEST(NetworkSerialization, LayerMajorRowMajorLayout) {
  NetworkParams p({2, 2, 1});
  p.weight(0)(1, 0) = 5.0;
  p.bias(0)(1) = 7.0;
  p.weight(1)(0, 1) = 9.0;
  const auto f = p.flat();
  EXPECT_EQ(f[2], 5.0);  // row 1, col 0 of the first 2x2 block
  EXPECT_EQ(f[5], 7.0);
  EXPECT_EQ(f[7], 9.0);
}

}  // namespace
}  // namespace rwpinn
