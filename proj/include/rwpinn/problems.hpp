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

// Burgess and extended Fisher-Kolmogorov (EFK) problem instances: operators,
// sources, initial/boundary data and closed-form solutions.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rwpinn/domain.hpp"
#include "rwpinn/errors.hpp"
#include "rwpinn/network.hpp"
#include "rwpinn/taylor.hpp"

namespace rwpinn {

enum class Mode { Forward, Inverse };
enum class OperatorKind { Burgess1D, EFK1D, EFK2D };

/// Partial derivatives of u consumed by residuals (absent ones stay zero).
template <class S>
struct Derivatives {
  S u{0.0}, u_t{0.0}, u_x{0.0}, u_xx{0.0}, u_xxxx{0.0}, u_y{0.0}, u_yy{0.0}, u_yyyy{0.0}, u_xxyy{0.0};

  S laplacian() const { return u_xx + u_yy; }
};

namespace detail {
struct DerivativeSlot {
  MultiIndex index;
  template <class S>
  static S& member(Derivatives<S>& d, int slot) {
    S* members[] = {&d.u, &d.u_t, &d.u_x, &d.u_xx, &d.u_xxxx, &d.u_y, &d.u_yy, &d.u_yyyy, &d.u_xxyy};
    return *members[slot];
  }
};
inline constexpr std::array<MultiIndex, 9> kDerivativeSlots{{
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 2, 0}, {0, 4, 0}, {0, 0, 1}, {0, 0, 2}, {0, 0, 4}, {0, 2, 2},
}};
}  // namespace detail

/// Number of named derivative slots in Derivatives.
inline constexpr int kNumDerivativeSlots = 9;

template <class S>
S& derivative_slot(Derivatives<S>& d, int slot) {
  return detail::DerivativeSlot::member(d, slot);
}
inline const MultiIndex& derivative_slot_index(int slot) { return detail::kDerivativeSlots[slot]; }

template <class S>
Derivatives<S> derivatives_from(const Taylor<S>& a) {
  Derivatives<S> d;
  for (int s = 0; s < kNumDerivativeSlots; ++s) {
    const MultiIndex& m = derivative_slot_index(s);
    if (a.basis()->contains(m)) derivative_slot(d, s) = extract_derivative(a, m);
  }
  return d;
}

struct ExactSolution {
  std::function<double(const Point&)> value;
  std::function<Taylor<double>(const Taylor<double>&, const Taylor<double>&, const Taylor<double>&)> taylor;
};

struct ProblemSpec {
  std::string name;
  DomainSpec domain;
  Mode mode = Mode::Forward;
  OperatorKind op = OperatorKind::Burgess1D;
  double gamma = 0.0;
  double beta = 0.0;
  std::function<double(const Point&)> source;
  std::function<double(const Point&)> initial;
  std::function<double(int, const Point&)> boundary_value;
  /// Laplacian trace data; empty when only Dirichlet values are enforced.
  std::function<double(int, const Point&)> boundary_laplacian;
  std::optional<ExactSolution> exact;

  bool is_efk() const { return op != OperatorKind::Burgess1D; }
  bool has_laplacian_trace() const { return static_cast<bool>(boundary_laplacian); }
  int boundary_streams() const { return has_laplacian_trace() ? 2 : 1; }

  void validate() const {
    domain.validate();
    if ((op == OperatorKind::EFK2D) != (domain.spatial_dim == 2))
      throw ContractError(name + ": operator and spatial dimension disagree");
    if (mode == Mode::Forward && (!initial || !boundary_value))
      throw ContractError(name + ": forward problems need initial and boundary data");
    if (mode == Mode::Inverse && !exact) throw ContractError(name + ": inverse problems need an exact solution");
    if (is_efk() && !(gamma > 0.0)) throw ContractError(name + ": EFK problems need gamma > 0");
  }
};

/// Degree caps of the derivative engine for an operator.
inline std::vector<int> degree_caps(OperatorKind op) {
  switch (op) {
    case OperatorKind::Burgess1D: return {1, 2};
    case OperatorKind::EFK1D: return {1, 4};
    case OperatorKind::EFK2D: return {1, 4, 4};
  }
  return {};
}

/// Coefficients read by the interior residual, closed downward.
inline BasisPtr interior_basis(OperatorKind op) {
  switch (op) {
    case OperatorKind::Burgess1D: return TaylorBasis::closure({1, 2}, {{1, 0, 0}, {0, 2, 0}});
    case OperatorKind::EFK1D: return TaylorBasis::closure({1, 4}, {{1, 0, 0}, {0, 2, 0}, {0, 4, 0}});
    case OperatorKind::EFK2D:
      return TaylorBasis::closure({1, 4, 4},
                                  {{1, 0, 0}, {0, 2, 0}, {0, 4, 0}, {0, 0, 2}, {0, 0, 4}, {0, 2, 2}});
  }
  return {};
}

/// Basis for boundary residuals: values only, or values and Laplacian.
inline BasisPtr boundary_basis(const ProblemSpec& p) {
  const auto caps = degree_caps(p.op);
  if (!p.has_laplacian_trace()) return TaylorBasis::closure(caps, {});
  if (p.domain.spatial_dim == 1) return TaylorBasis::closure(caps, {{0, 2, 0}});
  return TaylorBasis::closure(caps, {{0, 2, 0}, {0, 0, 2}});
}

inline BasisPtr value_basis(int input_dim) { return TaylorBasis::closure(std::vector<int>(input_dim, 1), {}); }

/// D(u) without the source term.
template <class S>
S interior_operator(const ProblemSpec& p, const Derivatives<S>& d) {
  using std::exp;
  switch (p.op) {
    case OperatorKind::Burgess1D:
      // u_t = u_xx / 2 + R(u),  R(u) = e^-u + e^-2u / 2
      return d.u_t - 0.5 * d.u_xx - (exp(-d.u) + 0.5 * exp(-2.0 * d.u));
    case OperatorKind::EFK1D:
      return d.u_t + p.gamma * d.u_xxxx - d.u_xx + d.u * d.u * d.u - d.u;
    case OperatorKind::EFK2D: {
      const S bilaplacian = d.u_xxxx + 2.0 * d.u_xxyy + d.u_yyyy;
      return d.u_t + p.gamma * bilaplacian - (d.u_xx + d.u_yy) + d.u * d.u * d.u - d.u;
    }
  }
  return S(0.0);
}

/// D(u) - f at one point, from the derivatives of the candidate u.
template <class S>
S interior_residual(const ProblemSpec& p, const Derivatives<S>& d, const Point& pt) {
  return interior_operator(p, d) - (p.source ? p.source(pt) : 0.0);
}

/// [u - Gamma_u] or [u - Gamma_u, Laplacian(u) - Gamma_Lu] on `face`.
template <class S>
std::vector<S> boundary_residuals(const ProblemSpec& p, const Derivatives<S>& d, int face, const Point& pt) {
  if (p.mode == Mode::Inverse) throw ContractError(p.name + ": boundary data is unknown in inverse mode");
  std::vector<S> r{d.u - p.boundary_value(face, pt)};
  if (p.has_laplacian_trace()) r.push_back(d.laplacian() - p.boundary_laplacian(face, pt));
  return r;
}

template <class S>
S temporal_residual(const ProblemSpec& p, const S& u, const Point& pt) {
  if (p.mode == Mode::Inverse) throw ContractError(p.name + ": initial data is unknown in inverse mode");
  return u - p.initial(pt);
}

/// Network inputs lifted into Taylor values around `pt`.
template <class S = double>
std::vector<Taylor<S>> lift_point(const BasisPtr& basis, const Point& pt) {
  std::vector<Taylor<S>> in;
  for (int v = 0; v < basis->num_vars(); ++v)
    in.push_back(basis->linear_index(v) == basis->size() ? Taylor<S>(basis, S(pt[v]))
                                                         : taylor_lift<S>(basis, S(pt[v]), v));
  return in;
}

inline double interior_residual(const ProblemSpec& p, const NetworkParams& params, const Point& pt) {
  const auto in = lift_point(interior_basis(p.op), pt);
  return interior_residual(p, derivatives_from(forward(params, in)), pt);
}

inline std::vector<double> boundary_residuals(const ProblemSpec& p, const NetworkParams& params, int face,
                                              const Point& pt) {
  if (p.mode == Mode::Inverse) throw ContractError(p.name + ": boundary data is unknown in inverse mode");
  const auto in = lift_point(boundary_basis(p), pt);
  return boundary_residuals(p, derivatives_from(forward(params, in)), face, pt);
}

inline double exact_solution(const ProblemSpec& p, const Point& pt) {
  if (!p.exact) throw ContractError(p.name + ": no exact solution");
  return p.exact->value(pt);
}

/// Derivatives of the closed-form solution at `pt` (interior basis).
inline Derivatives<double> exact_derivatives(const ProblemSpec& p, const Point& pt, const BasisPtr& basis) {
  if (!p.exact) throw ContractError(p.name + ": no exact solution");
  const auto in = lift_point(basis, pt);
  const Taylor<double> zero(basis, 0.0);
  const Taylor<double>& y = in.size() > 2 ? in[2] : zero;
  return derivatives_from(p.exact->taylor(in[0], in[1], y));
}

struct ProblemOptions {
  std::optional<double> gamma;
  std::optional<double> beta;
};

namespace problems {

using std::numbers::pi;

inline ProblemSpec burgess(Mode mode) {
  ProblemSpec p;
  p.name = mode == Mode::Forward ? "burgess1d" : "burgess1d-inv";
  p.domain = {1, 1.0};
  p.mode = mode;
  p.op = OperatorKind::Burgess1D;
  p.source = [](const Point&) { return 0.0; };
  p.exact = ExactSolution{
      [](const Point& q) { return std::log(q.x + q.t + 2.0); },
      [](const Taylor<double>& t, const Taylor<double>& x, const Taylor<double>&) { return log(x + t + 2.0); }};
  if (mode == Mode::Forward) {
    p.initial = [](const Point& q) { return std::log(q.x + 2.0); };
    p.boundary_value = [](int face, const Point& q) { return face == 0 ? std::log(q.t + 2.0) : std::log(q.t + 3.0); };
  }
  return p;
}

inline ExactSolution efk1d_exact() {
  return {[](const Point& q) { return std::exp(-q.t) * std::sin(pi * q.x); },
          [](const Taylor<double>& t, const Taylor<double>& x, const Taylor<double>&) {
            return exp(-t) * sin(x * pi);
          }};
}

inline std::function<double(const Point&)> efk1d_source(double gamma) {
  return [gamma](const Point& q) {
    const double s = std::sin(pi * q.x);
    return std::exp(-q.t) * s *
           (gamma * std::pow(pi, 4) + pi * pi - 2.0 + std::exp(-2.0 * q.t) * s * s);
  };
}

inline ProblemSpec efk1d(Mode mode, double gamma) {
  ProblemSpec p;
  p.name = mode == Mode::Forward ? "efk1d" : "efk1d-inv";
  p.domain = {1, 1.0};
  p.mode = mode;
  p.op = OperatorKind::EFK1D;
  p.gamma = gamma;
  p.source = efk1d_source(gamma);
  p.exact = efk1d_exact();
  if (mode == Mode::Forward) {
    p.initial = [](const Point& q) { return std::sin(pi * q.x); };
    p.boundary_value = [](int, const Point&) { return 0.0; };
  }
  return p;
}

/// Source-free EFK with homogeneous u and u_xx boundary data.
inline ProblemSpec efk1d_free(char variant, double gamma) {
  ProblemSpec p;
  p.name = std::string("efk1d-ic-") + variant;
  p.domain = {1, 1.0};
  p.mode = Mode::Forward;
  p.op = OperatorKind::EFK1D;
  p.gamma = gamma;
  p.source = [](const Point&) { return 0.0; };
  if (variant == 'a')
    p.initial = [](const Point& q) { return std::pow(q.x, 3) * std::pow(1.0 - q.x, 3); };
  else
    p.initial = [](const Point& q) { return q.x * q.x * (1.0 - q.x) * (1.0 - q.x); };
  p.boundary_value = [](int, const Point&) { return 0.0; };
  p.boundary_laplacian = [](int, const Point&) { return 0.0; };
  return p;
}

inline ProblemSpec efk2d(double gamma) {
  ProblemSpec p;
  p.name = "efk2d";
  p.domain = {2, 1.0};
  p.mode = Mode::Forward;
  p.op = OperatorKind::EFK2D;
  p.gamma = gamma;
  auto u = [](const Point& q) { return std::exp(-q.t) * std::sin(pi * q.x) * std::sin(pi * q.y); };
  // u_t = -u, Lap u = -2 pi^2 u, Lap^2 u = 4 pi^4 u
  p.source = [u, gamma](const Point& q) {
    const double v = u(q);
    return v * (4.0 * gamma * std::pow(pi, 4) + 2.0 * pi * pi - 2.0) + v * v * v;
  };
  p.exact = ExactSolution{u, [](const Taylor<double>& t, const Taylor<double>& x, const Taylor<double>& y) {
                            return exp(-t) * sin(x * pi) * sin(y * pi);
                          }};
  p.initial = [](const Point& q) { return std::sin(pi * q.x) * std::sin(pi * q.y); };
  p.boundary_value = [u](int, const Point& q) { return u(q); };
  p.boundary_laplacian = [u](int, const Point& q) { return -2.0 * pi * pi * u(q); };
  return p;
}

inline ProblemSpec efk2d_inverse(double gamma, double beta) {
  ProblemSpec p;
  p.name = "efk2d-inv";
  p.domain = {2, 1.0};
  p.mode = Mode::Inverse;
  p.op = OperatorKind::EFK2D;
  p.gamma = gamma;
  p.beta = beta;
  const double a = 1.0 / beta;
  auto gauss = [a](const Point& q) {
    const double r2 = (q.x - 0.5) * (q.x - 0.5) + (q.y - 0.5) * (q.y - 0.5);
    return std::exp(-a * r2);
  };
  // With G = exp(-a r^2): Lap G = (4a^2 r^2 - 4a) G,
  // Lap^2 G = (16a^4 r^4 - 64a^3 r^2 + 32a^2) G.
  p.source = [gauss, a, gamma](const Point& q) {
    const double r2 = (q.x - 0.5) * (q.x - 0.5) + (q.y - 0.5) * (q.y - 0.5);
    const double u = std::exp(-q.t) * gauss(q);
    const double lap = (4.0 * a * a * r2 - 4.0 * a) * u;
    const double bilap = (16.0 * a * a * a * a * r2 * r2 - 64.0 * a * a * a * r2 + 32.0 * a * a) * u;
    return -u + gamma * bilap - lap + u * u * u - u;
  };
  p.exact = ExactSolution{[gauss](const Point& q) { return std::exp(-q.t) * gauss(q); },
                          [a](const Taylor<double>& t, const Taylor<double>& x, const Taylor<double>& y) {
                            const auto dx = x - 0.5;
                            const auto dy = y - 0.5;
                            return exp(-t) * exp((dx * dx + dy * dy) * (-a));
                          }};
  return p;
}

}  // namespace problems

inline const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"burgess1d",     "efk1d", "efk1d-ic-a",    "efk1d-ic-b",
                                              "efk2d",         "burgess1d-inv", "efk1d-inv", "efk2d-inv"};
  return names;
}

/// Problem registry. Default coefficients: gamma 0.001 for the 1D
/// manufactured EFK cases, 0.01 for the source-free and 2D forward cases,
/// 1e-4 and beta = 1 for the 2D inverse case.
inline ProblemSpec make_problem(const std::string& name, const ProblemOptions& opt = {}) {
  ProblemSpec p;
  if (name == "burgess1d")
    p = problems::burgess(Mode::Forward);
  else if (name == "burgess1d-inv")
    p = problems::burgess(Mode::Inverse);
  else if (name == "efk1d")
    p = problems::efk1d(Mode::Forward, opt.gamma.value_or(0.001));
  else if (name == "efk1d-inv")
    p = problems::efk1d(Mode::Inverse, opt.gamma.value_or(0.001));
  else if (name == "efk1d-ic-a")
    p = problems::efk1d_free('a', opt.gamma.value_or(0.01));
  else if (name == "efk1d-ic-b")
    p = problems::efk1d_free('b', opt.gamma.value_or(0.01));
  else if (name == "efk2d")
    p = problems::efk2d(opt.gamma.value_or(0.01));
  else if (name == "efk2d-inv")
    p = problems::efk2d_inverse(opt.gamma.value_or(1e-4), opt.beta.value_or(1.0));
  else
    throw ArgumentError("unknown problem '" + name + "'");
  p.validate();
  return p;
}

}  // namespace rwpinn
