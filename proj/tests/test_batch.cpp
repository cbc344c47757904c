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

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rwpinn/batch.hpp"
#include "rwpinn/tape.hpp"

namespace rwpinn {
namespace {

struct BatchCase {
  int input_dim;
  BasisPtr basis;
};

std::vector<BatchCase> cases() {
  return {
      {2, TaylorBasis::closure({1, 2}, {{1, 0, 0}, {0, 2, 0}})},
      {2, TaylorBasis::closure({1, 4}, {{1, 0, 0}, {0, 2, 0}, {0, 4, 0}})},
      {3, TaylorBasis::closure({1, 4, 4}, {{1, 0, 0}, {0, 2, 0}, {0, 4, 0}, {0, 0, 2}, {0, 0, 4}, {0, 2, 2}})},
      {3, TaylorBasis::closure({1, 4, 4}, {})},
      {2, TaylorBasis::box({2, 3})},
  };
}

std::vector<Taylor<double>> lifts(const BasisPtr& b, const Eigen::MatrixXd& pts, Eigen::Index j) {
  std::vector<Taylor<double>> in;
  for (int v = 0; v < b->num_vars(); ++v)
    in.push_back(b->linear_index(v) == b->size() ? Taylor<double>(b, pts(v, j)) : taylor_lift(b, pts(v, j), v));
  return in;
}

TEST(TaylorBatchEngine, ForwardMatchesScalarTaylorPropagation) {
  for (const auto& c : cases()) {
    const auto p = init_params({3, 9, 17}, c.input_dim);
    TaylorBatchEngine engine(p.widths(), c.basis);
    const Eigen::MatrixXd pts = (Eigen::MatrixXd::Random(c.input_dim, 37).array() + 1.0) * 0.5;
    const Eigen::MatrixXd out = engine.forward(p.flat(), pts);
    ASSERT_EQ(out.rows(), 37);
    ASSERT_EQ(out.cols(), static_cast<Eigen::Index>(c.basis->size()));
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const auto u = forward(p, lifts(c.basis, pts, j));
      for (std::size_t k = 0; k < c.basis->size(); ++k)
        EXPECT_NEAR(out(j, static_cast<Eigen::Index>(k)), u[k], 1e-12 * std::max(1.0, std::abs(u[k])));
    }
  }
}

TEST(TaylorBatchEngine, BackwardMatchesTapeOverTaylor) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  for (const auto& c : cases()) {
    const auto p = init_params({2, 6, 23}, c.input_dim);
    TaylorBatchEngine engine(p.widths(), c.basis);
    const Eigen::MatrixXd pts = (Eigen::MatrixXd::Random(c.input_dim, 5).array() + 1.0) * 0.5;
    const Eigen::Index nc = static_cast<Eigen::Index>(c.basis->size());
    Eigen::MatrixXd adj(5, nc);
    for (Eigen::Index i = 0; i < adj.size(); ++i) adj.data()[i] = n01(rng);

    engine.forward(p.flat(), pts);
    std::vector<double> grad(p.size(), 0.0);
    engine.backward(p.flat(), adj, grad);

    // Reference: gradient of sum_j sum_k adj(j,k) * coeff_k(u(point j)) on the tape.
    const auto ref = loss_gradient(
        [&](std::span<const Var> theta) {
          Var total = 0.0;
          for (Eigen::Index j = 0; j < pts.cols(); ++j) {
            std::vector<Taylor<Var>> in;
            for (int v = 0; v < c.input_dim; ++v)
              in.push_back(c.basis->linear_index(v) == c.basis->size() ? Taylor<Var>(c.basis, Var(pts(v, j)))
                                                                       : taylor_lift<Var>(c.basis, Var(pts(v, j)), v));
            const auto u = forward<Var>(theta, p.widths(), in);
            for (Eigen::Index k = 0; k < nc; ++k) total = total + u[static_cast<std::size_t>(k)] * adj(j, k);
          }
          return total;
        },
        p.flat());
    for (std::size_t k = 0; k < grad.size(); ++k)
      EXPECT_NEAR(grad[k], ref.gradient[k], 1e-11 * std::max(1.0, std::abs(ref.gradient[k]))) << "entry " << k;
  }
}

TEST(TaylorBatchEngine, RejectsBasisWithWrongVariableCount) {
  EXPECT_THROW(TaylorBatchEngine({3, 4, 1}, TaylorBasis::box({1, 2})), ArgumentError);
}

}  // namespace
}  // namespace rwpinn
