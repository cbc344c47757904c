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
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rwpinn/taylor.hpp"

namespace rwpinn {
namespace {

using std::numbers::pi;

constexpr MultiIndex kX1{0, 1, 0}, kX2{0, 2, 0}, kX3{0, 3, 0}, kX4{0, 4, 0};

void expect_rel(double got, double want, double tol, const char* what) {
  const double scale = std::max(1.0, std::abs(want));
  EXPECT_LE(std::abs(got - want), tol * scale) << what << ": got " << got << " want " << want;
}

// Maclaurin coefficients of a univariate power series quotient a / b.
std::vector<double> series_divide(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> q(a.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    double s = a[n];
    for (std::size_t k = 1; k <= n; ++k) s -= b[k] * q[n - k];
    q[n] = s / b[0];
  }
  return q;
}

TEST(TaylorLift, IdentitySeed) {
  const auto basis = TaylorBasis::box({1, 4});
  const auto a = taylor_lift(basis, 0.3, kX);
  EXPECT_EQ(a.value(), 0.3);
  EXPECT_EQ(a.coefficient(kX1), 1.0);
  EXPECT_EQ(a.coefficient({1, 0, 0}), 0.0);
  for (std::size_t k = 0; k < basis->size(); ++k)
    if (basis->index(k) != MultiIndex{0, 0, 0} && basis->index(k) != kX1) {
      EXPECT_EQ(a[k], 0.0);
    }

  const auto t = taylor_lift(basis, 0.0, kT);
  EXPECT_EQ(t.value(), 0.0);
  EXPECT_EQ(t.coefficient({1, 0, 0}), 1.0);
}

TEST(TaylorLift, InvalidVariableThrows) {
  const auto basis = TaylorBasis::box({1, 4});
  EXPECT_THROW(taylor_lift(basis, 0.0, kY), ArgumentError);
  EXPECT_THROW(taylor_lift(basis, 0.0, -1), ArgumentError);
}

TEST(TaylorArithmetic, SquareOfLiftHasUnitQuadraticCoefficient) {
  const auto basis = TaylorBasis::box({1, 4});
  const auto x = taylor_lift(basis, 2.0, kX);
  const auto sq = x * x;
  EXPECT_EQ(sq.coefficient(kX2), 1.0);
  EXPECT_EQ(extract_derivative(sq, kX2), 2.0);
  EXPECT_EQ(sq.value(), 4.0);
}

TEST(TaylorArithmetic, MismatchedCapsThrow) {
  const auto a = taylor_lift(TaylorBasis::box({1, 4}), 1.0, kX);
  const auto b = taylor_lift(TaylorBasis::box({1, 2}), 1.0, kX);
  EXPECT_THROW(a * b, ArgumentError);
  EXPECT_THROW(a + b, ArgumentError);
}

TEST(TaylorArithmetic, ClosureKeepsCaps) {
  const auto basis = TaylorBasis::box({1, 4});
  const auto x = taylor_lift(basis, 0.4, kX);
  const auto t = taylor_lift(basis, 0.2, kT);
  for (const auto& r : {x + t, x * t, tanh(x * t), exp(x) * sin(t)}) {
    EXPECT_TRUE(r.basis()->same_as(*basis));
    EXPECT_EQ(r.coefficients().size(), basis->size());
  }
  EXPECT_FALSE(basis->contains({2, 0, 0}));
  EXPECT_FALSE(basis->contains({0, 5, 0}));
}

TEST(TaylorTanh, MaclaurinSeries) {
  const auto basis = TaylorBasis::box({1, 4});
  const auto r = tanh(taylor_lift(basis, 0.0, kX));
  EXPECT_NEAR(r.value(), 0.0, 1e-15);
  EXPECT_NEAR(r.coefficient(kX1), 1.0, 1e-15);
  EXPECT_NEAR(r.coefficient(kX2), 0.0, 1e-15);
  EXPECT_NEAR(r.coefficient(kX3), -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.coefficient(kX4), 0.0, 1e-15);
}

TEST(TaylorTanh, ConstantInput) {
  const auto basis = TaylorBasis::box({1, 4});
  const auto r = tanh(Taylor<double>(basis, 0.5));
  EXPECT_NEAR(r.value(), 0.46211715726000974, 1e-14);
  for (std::size_t k = 1; k < basis->size(); ++k) EXPECT_EQ(r[k], 0.0);
}

TEST(TaylorTanh, MatchesSeriesQuotientOracle) {
  // tanh(x0 + h) = (e^{2x0} e^{2h} - 1) / (e^{2x0} e^{2h} + 1), expanded as power series in h.
  const auto basis = TaylorBasis::box({1, 8});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double x0 = u(rng);
    const double e = std::exp(2.0 * x0);
    std::vector<double> num(9), den(9);
    for (int k = 0; k <= 8; ++k) {
      const double c = e * std::pow(2.0, k) / factorial(k);
      num[k] = c;
      den[k] = c;
    }
    num[0] -= 1.0;
    den[0] += 1.0;
    const auto q = series_divide(num, den);
    const auto r = tanh(taylor_lift(basis, x0, kX));
    for (int k = 0; k <= 8; ++k) expect_rel(r.coefficient({0, k, 0}), q[k], 1e-10, "tanh coefficient");
  }
}

TEST(TaylorExtract, FourthDerivativeOfSine) {
  const auto basis = TaylorBasis::box({1, 4});
  const auto a = sin(taylor_lift(basis, 0.25, kX) * pi);
  const double want = std::pow(pi, 4) * std::sin(pi / 4.0);
  EXPECT_NEAR(extract_derivative(a, kX4), want, 1e-10 * want);
  EXPECT_NEAR(want, 68.88, 0.01);
  EXPECT_EQ(extract_derivative(a, {0, 0, 0}), a.value());
}

TEST(TaylorExtract, MixedFourthOrder) {
  const auto basis = TaylorBasis::box({1, 4, 4});
  const auto x = taylor_lift(basis, 1.0, kX);
  const auto y = taylor_lift(basis, 1.0, kY);
  EXPECT_NEAR(extract_derivative(x * x * y * y, {0, 2, 2}), 4.0, 1e-14);
}

TEST(TaylorExtract, OutOfCapThrows) {
  const auto basis = TaylorBasis::box({1, 2});
  const auto x = taylor_lift(basis, 1.0, kX);
  EXPECT_THROW(extract_derivative(x, kX4), ArgumentError);
  EXPECT_THROW(extract_derivative(x, {2, 0, 0}), ArgumentError);
}

TEST(TaylorBasisTest, ClosureContainsOnlyDownwardClosureOfReads) {
  const auto b = TaylorBasis::closure({1, 4, 4}, {{1, 0, 0}, {0, 2, 0}, {0, 4, 0}, {0, 0, 2}, {0, 0, 4}, {0, 2, 2}});
  EXPECT_EQ(b->size(), 14u);
  EXPECT_TRUE(b->contains({0, 1, 1}));
  EXPECT_FALSE(b->contains({1, 1, 0}));
  EXPECT_FALSE(b->contains({0, 3, 1}));
  EXPECT_EQ(TaylorBasis::closure({1, 2}, {{1, 0, 0}, {0, 2, 0}})->size(), 4u);
  EXPECT_EQ(TaylorBasis::closure({1, 4}, {{1, 0, 0}, {0, 2, 0}, {0, 4, 0}})->size(), 6u);
}

TEST(TaylorBasisTest, ReadSetMatchesFullBoxOnReadCoefficients) {
  const auto full = TaylorBasis::box({1, 4, 4});
  const auto reduced =
      TaylorBasis::closure({1, 4, 4}, {{1, 0, 0}, {0, 2, 0}, {0, 4, 0}, {0, 0, 2}, {0, 0, 4}, {0, 2, 2}});
  auto f = [](const BasisPtr& b) {
    const auto t = taylor_lift(b, 0.3, kT), x = taylor_lift(b, 0.6, kX), y = taylor_lift(b, 0.2, kY);
    return tanh(x * 0.7 - y * 1.3 + t * 0.4) * exp(x * y);
  };
  const auto a = f(full), b = f(reduced);
  for (const auto& m : reduced->indices()) EXPECT_NEAR(a.coefficient(m), b.coefficient(m), 1e-13);
}

struct UnivariateCase {
  const char* name;
  Taylor<double> (*apply)(const Taylor<double>&);
  double (*derivative)(double x0, int n);
  double lo, hi;
};

const UnivariateCase kCases[] = {
    {"exp", [](const Taylor<double>& a) { return exp(a); }, [](double x, int) { return std::exp(x); }, -2, 2},
    {"log", [](const Taylor<double>& a) { return log(a); },
     [](double x, int n) {
       return n == 0 ? std::log(x) : ((n - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(n - 1) / std::pow(x, n);
     },
     0.3, 3},
    {"sin", [](const Taylor<double>& a) { return sin(a); }, [](double x, int n) { return std::sin(x + n * pi / 2); },
     -3, 3},
    {"cos", [](const Taylor<double>& a) { return cos(a); }, [](double x, int n) { return std::cos(x + n * pi / 2); },
     -3, 3},
    {"cube", [](const Taylor<double>& a) { return pow(a, 3); },
     [](double x, int n) { return n > 3 ? 0.0 : std::pow(x, 3 - n) * factorial(3) / factorial(3 - n); }, -2, 2},
    {"pow2.5", [](const Taylor<double>& a) { return pow(a, 2.5); },
     [](double x, int n) {
       double c = 1.0;
       for (int j = 0; j < n; ++j) c *= 2.5 - j;
       return c * std::pow(x, 2.5 - n);
     },
     0.2, 3},
    {"reciprocal", [](const Taylor<double>& a) { return reciprocal(a); },
     [](double x, int n) { return (n % 2 == 0 ? 1.0 : -1.0) * factorial(n) / std::pow(x, n + 1); }, 0.5, 3},
};

TEST(TaylorElementary, UnivariateDerivativesMatchClosedForms) {
  const auto basis = TaylorBasis::box({1, 6});
  std::mt19937_64 rng(11);
  for (const auto& c : kCases) {
    std::uniform_real_distribution<double> u(c.lo, c.hi);
    for (int trial = 0; trial < 25; ++trial) {
      const double x0 = u(rng);
      const auto r = c.apply(taylor_lift(basis, x0, kX));
      for (int n = 0; n <= 6; ++n) expect_rel(extract_derivative(r, {0, n, 0}), c.derivative(x0, n), 1e-10, c.name);
    }
  }
}

TEST(TaylorElementary, ProductAndSumMixedPartials) {
  // f = exp(x y): d^2/dx^2 d^2/dy^2 f = (2 + 4xy + x^2 y^2) e^{xy}; d^4/dx^4 f = y^4 e^{xy}.
  const auto basis = TaylorBasis::box({1, 4, 4});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 25; ++trial) {
    const double x0 = u(rng), y0 = u(rng), t0 = u(rng);
    const auto x = taylor_lift(basis, x0, kX), y = taylor_lift(basis, y0, kY), t = taylor_lift(basis, t0, kT);
    const auto f = exp(x * y);
    const double e = std::exp(x0 * y0);
    expect_rel(extract_derivative(f, {0, 2, 2}), (2 + 4 * x0 * y0 + x0 * x0 * y0 * y0) * e, 1e-10, "xxyy");
    expect_rel(extract_derivative(f, {0, 4, 0}), std::pow(y0, 4) * e, 1e-10, "xxxx");
    const auto g = t * sin(x) + x * y * y;
    expect_rel(extract_derivative(g, {1, 1, 0}), std::cos(x0), 1e-12, "tx");
    expect_rel(extract_derivative(g, {0, 1, 2}), 2.0, 1e-12, "xyy");
    expect_rel(extract_derivative(g, {1, 0, 0}), std::sin(x0), 1e-12, "t");
  }
}

TEST(TaylorProperty, ExtractionIsLinear) {
  const auto basis = TaylorBasis::box({1, 4});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng);
    const auto x = taylor_lift(basis, u(rng), kX), t = taylor_lift(basis, u(rng), kT);
    const auto f = tanh(x * t + x), g = exp(x) * cos(t);
    const auto h = f * a + g * b;
    for (const auto& m : basis->indices())
      EXPECT_NEAR(extract_derivative(h, m), a * extract_derivative(f, m) + b * extract_derivative(g, m), 1e-12);
  }
}

TEST(TaylorProperty, MixedPartialIndependentOfLiftOrder) {
  const auto basis = TaylorBasis::box({1, 4, 4});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double x0 = u(rng), y0 = u(rng);
    const auto y1 = taylor_lift(basis, y0, kY);
    const auto x1 = taylor_lift(basis, x0, kX);
    const auto x2 = taylor_lift(basis, x0, kX);
    const auto y2 = taylor_lift(basis, y0, kY);
    const auto a = tanh(x1 * 0.8 + y1 * 0.5) * sin(y1);
    const auto b = sin(y2) * tanh(y2 * 0.5 + x2 * 0.8);
    EXPECT_NEAR(a.coefficient({0, 2, 2}), b.coefficient({0, 2, 2}), 1e-13);
  }
}

}  // namespace
}  // namespace rwpinn
