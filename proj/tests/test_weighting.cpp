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
#include <vector>

#include <gtest/gtest.h>

#include "rwpinn/tape.hpp"
#include "rwpinn/weighting.hpp"

namespace rwpinn {
namespace {

const WeightScheme kRWa{WeightKind::RWa, 1.0};
const WeightScheme kRWb{WeightKind::RWb, 1.0};

TEST(Weighting, ValuesAtZeroResidual) {
  EXPECT_NEAR(weight(kRWa, 0.0), 0.5, 1e-12);
  EXPECT_NEAR(weight(kRWb, 0.0), 0.6, 1e-12);  // tanh(log 2)
  EXPECT_EQ(weight(WeightScheme{}, 3.0), 1.0);
}

TEST(Weighting, ClosedForms) {
  for (double r : {-3.0, -0.4, 0.0, 0.7, 5.0})
    for (double s : {0.25, 1.0}) {
      EXPECT_NEAR(weight({WeightKind::RWa, s}, r), 1.0 / (1.0 + std::exp(s * r)), 1e-15);
      EXPECT_NEAR(weight({WeightKind::RWb, s}, r), std::tanh(std::log(1.0 + std::exp(-s * r))), 1e-15);
    }
}

TEST(Weighting, LargeResidualsAreSuppressed) {
  EXPECT_LT(weight(kRWa, 100.0), 1e-40);
  EXPECT_GT(weight(kRWa, 100.0), 0.0);
  EXPECT_NEAR(weighted_interior_residual(kRWa, 100.0), 0.0, 1e-38);
  EXPECT_EQ(weight(kRWa, 1e6), 0.0);
  EXPECT_NEAR(weight(kRWa, -1e6), 1.0, 0.0);
  EXPECT_TRUE(std::isfinite(weight(kRWb, -1e6)));
}

TEST(Weighting, StrictlyDecreasingInsideTheUnitInterval) {
  for (const auto& s : {kRWa, kRWb, WeightScheme{WeightKind::RWb, 0.3}}) {
    double prev = 2.0;
    for (double r = -8.0; r <= 20.0; r += 0.05) {
      const double w = weight(s, r);
      EXPECT_GT(w, 0.0);
      EXPECT_LT(w, 1.0);
      EXPECT_LT(w, prev) << r;
      prev = w;
    }
  }
}

TEST(Weighting, SigmoidSymmetry) {
  for (double r = -10.0; r <= 10.0; r += 0.37) EXPECT_NEAR(weight(kRWa, r) + weight(kRWa, -r), 1.0, 1e-15);
}

TEST(Weighting, DetachedWeightFactorsTheGradient) {
  // r(a, b) = a^2 b - b; d(W r)/d(a, b) must equal W(r0) dr/d(a, b).
  for (const auto& s : {kRWa, kRWb}) {
    for (double a0 : {-1.3, 0.2, 0.9}) {
      AdjointTape tape;
      const std::vector<Var> in{tape.variable(a0), tape.variable(0.7)};
      const Var r = in[0] * in[0] * in[1] - in[1];
      const Var wr = weighted_interior_residual(s, r);
      const auto g = tape.gradient(wr, in);
      AdjointTape plain;
      const std::vector<Var> in2{plain.variable(a0), plain.variable(0.7)};
      const auto dr = plain.gradient(in2[0] * in2[0] * in2[1] - in2[1], in2);
      const double W = weight(s, r.value());
      EXPECT_NEAR(g[0], W * dr[0], 1e-12);
      EXPECT_NEAR(g[1], W * dr[1], 1e-12);
    }
  }
}

TEST(Weighting, NoneIsTheIdentity) {
  for (double r : {-2.0, 0.0, 1e-300, 7.5}) EXPECT_EQ(weighted_interior_residual(WeightScheme{}, r), r);
}

TEST(Weighting, ScaleMustLieInUnitInterval) {
  EXPECT_THROW((WeightScheme{WeightKind::RWa, 0.0}.validate()), ArgumentError);
  EXPECT_THROW((WeightScheme{WeightKind::RWb, 1.5}.validate()), ArgumentError);
  EXPECT_NO_THROW((WeightScheme{WeightKind::RWb, 1.0}.validate()));
  EXPECT_NO_THROW((WeightScheme{WeightKind::None, 5.0}.validate()));
}

TEST(Weighting, MethodNames) {
  EXPECT_EQ(parse_method("rwa"), WeightKind::RWa);
  EXPECT_EQ(method_name(parse_method("rwb")), "rwb");
  EXPECT_EQ(method_name(parse_method("pinn")), "pinn");
  EXPECT_THROW(parse_method("RWB"), ArgumentError);
}

}  // namespace
}  // namespace rwpinn
