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

// Generalization error against closed-form solutions and a numeric
// evaluation of the a-posteriori error bound
//   E_G <= C1 (E_tb + E_int + C2 sqrt(E_sb) + q_tb^1/2 + q_int^1/2 + C2 q_sb^1/4)
// with the quadrature terms q measured rather than assumed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rwpinn/batch.hpp"
#include "rwpinn/loss.hpp"
#include "rwpinn/network.hpp"
#include "rwpinn/problems.hpp"
#include "rwpinn/sampling.hpp"

namespace rwpinn {

/// Default test-grid resolution per axis.
inline int default_resolution(const DomainSpec& d) { return d.spatial_dim == 1 ? 201 : 51; }

inline Eigen::MatrixXd to_matrix(const std::vector<Point>& pts, int input_dim) {
  Eigen::MatrixXd m(input_dim, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (int v = 0; v < input_dim; ++v) m(v, static_cast<Eigen::Index>(j)) = pts[j][v];
  return m;
}

/// Network Taylor coefficients (points x basis) at many points.
inline Eigen::MatrixXd network_coefficients(const NetworkParams& params, const BasisPtr& basis,
                                            const std::vector<Point>& pts) {
  TaylorBatchEngine engine(params.widths(), basis);
  const Eigen::MatrixXd m = to_matrix(pts, params.input_dim());
  Eigen::MatrixXd out(m.cols(), static_cast<Eigen::Index>(basis->size()));
  constexpr Eigen::Index kChunk = 64;
  for (Eigen::Index b = 0; b < m.cols(); b += kChunk) {
    const Eigen::Index n = std::min(kChunk, m.cols() - b);
    out.middleRows(b, n) = engine.forward(params.flat(), m.middleCols(b, n));
  }
  return out;
}

inline Derivatives<double> derivatives_from_row(const BasisPtr& basis, const Eigen::MatrixXd& coeffs,
                                                Eigen::Index row) {
  Derivatives<double> d;
  for (int s = 0; s < kNumDerivativeSlots; ++s) {
    const MultiIndex& m = derivative_slot_index(s);
    if (basis->contains(m))
      derivative_slot(d, s) = coeffs(row, static_cast<Eigen::Index>(basis->find(m))) * factorial_product(m);
  }
  return d;
}

struct SliceError {
  double t = 0.0;
  double l2 = 0.0;
};

struct ErrorReport {
  double absolute = 0.0;  // E_G
  double relative = 0.0;  // E_G / ||u||
  double sup = 0.0;
  double exact_norm = 0.0;
  int resolution = 0;
  std::vector<SliceError> slices;
};

inline const std::vector<double>& slice_times() {
  static const std::vector<double> t{0.0, 0.25, 0.5, 0.75, 1.0};
  return t;
}

/// Composite-trapezoid L2 space-time error against the exact solution.
inline ErrorReport generalization_error(const ProblemSpec& p, const NetworkParams& params, int resolution = 0) {
  if (!p.exact) throw ContractError(p.name + ": generalization error needs an exact solution");
  if (resolution <= 0) resolution = default_resolution(p.domain);
  const TestGrid grid = test_grid(p.domain, resolution);
  ErrorReport r;
  r.resolution = resolution;
  const std::size_t ns = grid.spatial_size();
  std::vector<Point> pts(ns);
  double err2 = 0.0, norm2 = 0.0;
  for (std::size_t it = 0; it < grid.t_nodes.size(); ++it) {
    for (std::size_t k = 0; k < ns; ++k) pts[k] = grid.spatial_point(k, grid.t_nodes[it]);
    const Eigen::VectorXd u = evaluate(params, to_matrix(pts, params.input_dim()));
    for (std::size_t k = 0; k < ns; ++k) {
      const double ue = p.exact->value(pts[k]);
      const double e = u(static_cast<Eigen::Index>(k)) - ue;
      const double w = grid.t_weights[it] * grid.spatial_weight(k);
      err2 += w * e * e;
      norm2 += w * ue * ue;
      r.sup = std::max(r.sup, std::abs(e));
    }
  }
  r.absolute = std::sqrt(err2);
  r.exact_norm = std::sqrt(norm2);
  r.relative = r.exact_norm > 0.0 ? r.absolute / r.exact_norm : std::numeric_limits<double>::infinity();
  const TestGrid sgrid = spatial_grid(p.domain.spatial_dim, resolution);
  for (double t : slice_times()) {
    if (t > p.domain.T) continue;
    for (std::size_t k = 0; k < ns; ++k) pts[k] = sgrid.spatial_point(k, t);
    const Eigen::VectorXd u = evaluate(params, to_matrix(pts, params.input_dim()));
    double s = 0.0;
    for (std::size_t k = 0; k < ns; ++k) {
      const double e = u(static_cast<Eigen::Index>(k)) - p.exact->value(pts[k]);
      s += sgrid.spatial_weight(k) * e * e;
    }
    r.slices.push_back({t, std::sqrt(s)});
  }
  return r;
}

/// Assumed quadrature rates: 1 for Sobol families, 1/2 for random ones.
struct QuadratureRates {
  double interior = 1.0, sb = 1.0, tb = 1.0;

  static QuadratureRates for_strategy(SamplingStrategy s) {
    const double a = s == SamplingStrategy::Sobol ? 1.0 : 0.5;
    return {a, a, a};
  }
};

/// One residual family: training error at the training points, the
/// residual's L2 norm on a fine grid, and the measured quadrature gap.
struct FamilyTerm {
  double training_error = 0.0;  // sqrt(sum w R^2) over training points (0 if not trained)
  double integral = 0.0;        // int R^2 on the fine grid
  double quadrature = 0.0;      // |integral - training_error^2|
  int count = 0;
  double rate = 1.0;
  double implied_constant = 0.0;  // quadrature * count^rate
};

struct BoundDiagnostics {
  std::string theorem;  // "burgess" or "efk"
  FamilyTerm interior, sb, tb;
  double C1 = 0.0, C2 = 0.0, C3 = 0.0;
  double lipschitz = 0.0;  // C_R (Burgess) or C_F (EFK)
  double C_E = 0.0;        // heuristic, set to C_F
  double C_boundary = 0.0;  // C_dD (Burgess)
  double norm_exact = 0.0, norm_network = 0.0;      // C^1 on the boundary or C^2_x
  double norm3_exact = 0.0, norm3_network = 0.0;    // C^3_x (EFK)
  double u_min = 0.0, u_max = 0.0;
  double bound = 0.0;
  double generalization_error = 0.0;
  double ratio = 0.0;
  bool holds = false;
  std::string notes;
};

namespace detail {

/// Sum over the listed derivative orders of sup |D^m f| at the given rows.
inline double c_norm(const BasisPtr& basis, const Eigen::MatrixXd& coeffs, const std::vector<MultiIndex>& orders) {
  double s = 0.0;
  for (const MultiIndex& m : orders) {
    const auto k = static_cast<Eigen::Index>(basis->require(m));
    s += coeffs.col(k).cwiseAbs().maxCoeff() * factorial_product(m);
  }
  return s;
}

inline Eigen::MatrixXd exact_coefficients(const ProblemSpec& p, const BasisPtr& basis, const std::vector<Point>& pts) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(basis->size()));
  const Taylor<double> zero(basis, 0.0);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const auto in = lift_point(basis, pts[j]);
    const auto u = p.exact->taylor(in[0], in[1], in.size() > 2 ? in[2] : zero);
    for (std::size_t k = 0; k < basis->size(); ++k) out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = u[k];
  }
  return out;
}

/// Spatial multi-indices with total order <= n.
inline std::vector<MultiIndex> spatial_orders(int spatial_dim, int n) {
  std::vector<MultiIndex> out;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= (spatial_dim == 2 ? n - i : 0); ++j) out.push_back({0, i, j});
  return out;
}

/// Boundary nodes of a trapezoid grid with the face tag and 1D/2D weights.
struct BoundaryNode {
  Point point;
  double weight;
  int face;
};

inline std::vector<BoundaryNode> boundary_nodes(const DomainSpec& d, int resolution) {
  std::vector<double> tn, tw, sn, sw;
  trapezoid_rule(resolution, d.T, tn, tw);
  trapezoid_rule(resolution, 1.0, sn, sw);
  std::vector<BoundaryNode> out;
  for (int f = 0; f < d.num_faces(); ++f)
    for (std::size_t i = 0; i < tn.size(); ++i) {
      if (d.spatial_dim == 1) {
        Point p;
        p.t = tn[i];
        p[face_axis(f)] = face_coordinate(f);
        out.push_back({p, tw[i], f});
        continue;
      }
      for (std::size_t j = 0; j < sn.size(); ++j) {
        Point p;
        p.t = tn[i];
        p[face_axis(f)] = face_coordinate(f);
        p[face_axis(f) == 1 ? 2 : 1] = sn[j];
        out.push_back({p, tw[i] * sw[j], f});
      }
    }
  return out;
}

inline void finish(FamilyTerm& f, double rate) {
  f.quadrature = std::abs(f.integral - f.training_error * f.training_error);
  f.rate = rate;
  f.implied_constant = f.count > 0 ? f.quadrature * std::pow(static_cast<double>(f.count), rate) : 0.0;
}

}  // namespace detail

/// Evaluates the right side of the bound for a trained network. The
/// interior term uses the unweighted PDE residual. Boundary and initial
/// residuals are taken against the exact solution's traces (u, and the
/// Laplacian for EFK), so families absent from training contribute only
/// through their measured quadrature gap. C-norms are maxima over the grid,
/// hence lower estimates of the true suprema.
inline BoundDiagnostics bound_diagnostics(const ProblemSpec& p, const NetworkParams& params, const TrainingSet& set,
                                          const QuadratureRates& rates, int resolution = 0) {
  if (!p.exact) throw ContractError(p.name + ": bound diagnostics need an exact solution");
  const DomainSpec& dom = p.domain;
  const int dim = dom.spatial_dim;
  if (resolution <= 0) resolution = dim == 1 ? 101 : 25;
  BoundDiagnostics b;
  b.theorem = p.is_efk() ? "efk" : "burgess";
  const double T = dom.T;

  // Trace problem: forward twin with boundary/initial data from the exact solution.
  ProblemSpec trace = p;
  const auto exact = *p.exact;
  trace.mode = Mode::Forward;
  trace.initial = [exact](const Point& q) {
    Point z = q;
    z.t = 0.0;
    return exact.value(z);
  };
  trace.boundary_value = [exact](int, const Point& q) { return exact.value(q); };
  if (p.is_efk()) {
    const BasisPtr lb = TaylorBasis::closure(degree_caps(p.op), dim == 1 ? std::vector<MultiIndex>{{0, 2, 0}}
                                                                         : std::vector<MultiIndex>{{0, 2, 0}, {0, 0, 2}});
    trace.boundary_laplacian = [exact, lb, dim](int, const Point& q) {
      const auto in = lift_point(lb, q);
      const Taylor<double> zero(lb, 0.0);
      const auto u = exact.taylor(in[0], in[1], dim == 2 ? in[2] : zero);
      double lap = extract_derivative(u, {0, 2, 0});
      if (dim == 2) lap += extract_derivative(u, {0, 0, 2});
      return lap;
    };
  }

  // Training errors at the training points, trace residuals where trained.
  {
    LossModel plain(p, params.widths(), set, WeightScheme{}, 1.0);
    const LossBreakdown L = plain.evaluate(params.flat());
    b.interior.training_error = std::sqrt(L.interior_raw);
    b.interior.count = static_cast<int>(set.interior.size());
    if (p.mode == Mode::Forward) {
      TrainingSet boundary_only;
      boundary_only.interior = set.interior;
      boundary_only.spatial_boundary = set.spatial_boundary;
      boundary_only.temporal_boundary = set.temporal_boundary;
      LossModel traced(trace, params.widths(), boundary_only, WeightScheme{}, 1.0);
      const LossBreakdown Lt = traced.evaluate(params.flat());
      // Streams not enforced in training count as untrained (pure quadrature gap).
      b.sb.training_error = p.has_laplacian_trace() == trace.has_laplacian_trace() ? std::sqrt(Lt.sb) : 0.0;
      b.tb.training_error = std::sqrt(Lt.tb);
      b.sb.count = b.sb.training_error > 0.0 ? static_cast<int>(set.spatial_boundary.size()) : 0;
      b.tb.count = static_cast<int>(set.temporal_boundary.size());
    }
  }

  // Fine-grid integrals of the squared residuals.
  const TestGrid grid = test_grid(dom, resolution);
  std::vector<Point> gpts(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) gpts[i] = grid.point(i);
  const BasisPtr ib = interior_basis(p.op);
  const Eigen::MatrixXd ic = network_coefficients(params, ib, gpts);
  b.u_min = std::numeric_limits<double>::infinity();
  b.u_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gpts.size(); ++i) {
    const auto d = derivatives_from_row(ib, ic, static_cast<Eigen::Index>(i));
    const double r = interior_residual(p, d, gpts[i]);
    b.interior.integral += grid.weight(i) * r * r;
    const double ue = p.exact->value(gpts[i]);
    b.u_min = std::min({b.u_min, d.u, ue});
    b.u_max = std::max({b.u_max, d.u, ue});
  }

  const auto bnodes = detail::boundary_nodes(dom, resolution);
  {
    std::vector<Point> pts;
    for (const auto& n : bnodes) pts.push_back(n.point);
    const BasisPtr bb = boundary_basis(trace);
    const Eigen::MatrixXd bc = network_coefficients(params, bb, pts);
    for (std::size_t i = 0; i < bnodes.size(); ++i) {
      const auto d = derivatives_from_row(bb, bc, static_cast<Eigen::Index>(i));
      for (double r : boundary_residuals(trace, d, bnodes[i].face, bnodes[i].point))
        b.sb.integral += bnodes[i].weight * r * r;
    }
  }
  {
    const TestGrid sg = spatial_grid(dim, resolution);
    std::vector<Point> pts(sg.spatial_size());
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = sg.spatial_point(k, 0.0);
    const Eigen::VectorXd u = evaluate(params, to_matrix(pts, params.input_dim()));
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double r = u(static_cast<Eigen::Index>(k)) - trace.initial(pts[k]);
      b.tb.integral += sg.spatial_weight(k) * r * r;
    }
  }
  detail::finish(b.interior, rates.interior);
  detail::finish(b.sb, rates.sb);
  detail::finish(b.tb, rates.tb);

  const double umin = b.u_min, umax = b.u_max;
  if (!p.is_efk()) {
    // |R'(u)| = e^-u + e^-2u is decreasing, so its sup sits at the smallest value.
    b.lipschitz = std::exp(-umin) + std::exp(-2.0 * umin);
    std::vector<Point> pts;
    for (const auto& n : bnodes) pts.push_back(n.point);
    const BasisPtr c1 = TaylorBasis::box({1, 1});
    const std::vector<MultiIndex> orders{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    b.norm_exact = detail::c_norm(c1, detail::exact_coefficients(p, c1, pts), orders);
    b.norm_network = detail::c_norm(c1, network_coefficients(params, c1, pts), orders);
    b.C_boundary = 0.5 * std::sqrt(dom.boundary_measure()) * (b.norm_exact + b.norm_network);
    const double k = 1.0 + 2.0 * b.lipschitz;
    b.C1 = std::sqrt(T + k * T * T * std::exp(k * T));
    b.C2 = std::sqrt(b.C_boundary * std::sqrt(T));
  } else {
    // |F'(u)| = |3u^2 - 1| on [umin, umax]
    const double m = std::max(umin * umin, umax * umax);
    b.lipschitz = std::max(std::abs(3.0 * m - 1.0), (umin <= 0.0 && umax >= 0.0) ? 1.0 : 0.0);
    b.lipschitz = std::max(b.lipschitz, std::abs(3.0 * std::min(umin * umin, umax * umax) - 1.0));
    b.C_E = b.lipschitz;
    const TestGrid ng = test_grid(dom, dim == 1 ? 51 : 17);
    std::vector<Point> pts(ng.size());
    for (std::size_t i = 0; i < ng.size(); ++i) pts[i] = ng.point(i);
    const auto o2 = detail::spatial_orders(dim, 2), o3 = detail::spatial_orders(dim, 3);
    std::vector<MultiIndex> reads(o3.begin(), o3.end());
    const BasisPtr cb = TaylorBasis::closure(dim == 1 ? std::vector<int>{1, 3} : std::vector<int>{1, 3, 3}, reads);
    const Eigen::MatrixXd ue = detail::exact_coefficients(p, cb, pts), un = network_coefficients(params, cb, pts);
    b.norm_exact = detail::c_norm(cb, ue, o2);
    b.norm_network = detail::c_norm(cb, un, o2);
    b.norm3_exact = detail::c_norm(cb, ue, o3);
    b.norm3_network = detail::c_norm(cb, un, o3);
    const double n2 = b.norm_exact + b.norm_network, n3 = b.norm3_exact + b.norm3_network;
    b.C3 = std::sqrt(p.gamma * n2 * n2 + n2 + 0.5 + b.C_E);
    b.C1 = std::sqrt(T + 2.0 * T * T * b.C3 * std::exp(2.0 * b.C3 * T));
    b.C2 = std::sqrt(8.0 * p.gamma * n3 * std::sqrt(T));
  }

  b.bound = b.C1 * (b.tb.training_error + b.interior.training_error + b.C2 * std::sqrt(b.sb.training_error) +
                    std::sqrt(b.tb.quadrature) + std::sqrt(b.interior.quadrature) +
                    b.C2 * std::pow(b.sb.quadrature, 0.25));
  b.generalization_error = generalization_error(p, params).absolute;
  b.ratio = b.bound > 0.0 ? b.generalization_error / b.bound : std::numeric_limits<double>::infinity();
  b.holds = b.generalization_error <= b.bound;
  if (p.is_efk()) b.notes = "C_E set equal to C_F (heuristic); ";
  if (p.mode == Mode::Inverse) b.notes += "boundary and initial terms measured against exact traces only; ";
  b.notes += "C-norms are grid maxima (lower estimates)";
  return b;
}

/// Trapezoid value of the energy (gamma/2)|Lap u|^2 + |grad u|^2 / 2 + (1 - u^2)^2 / 4
/// at fixed t, from per-node Derivatives.
inline double energy_from(const TestGrid& sg, const std::vector<Derivatives<double>>& d, double gamma) {
  double e = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double lap = d[k].u_xx + d[k].u_yy;
    const double grad2 = d[k].u_x * d[k].u_x + d[k].u_y * d[k].u_y;
    const double w = 1.0 - d[k].u * d[k].u;
    e += sg.spatial_weight(k) * (0.5 * gamma * lap * lap + 0.5 * grad2 + 0.25 * w * w);
  }
  return e;
}

/// Energy of a network at time t on a spatial trapezoid grid.
inline double efk_energy(const NetworkParams& params, double t, int resolution, double gamma, int spatial_dim = 1) {
  const TestGrid sg = spatial_grid(spatial_dim, resolution);
  std::vector<Point> pts(sg.spatial_size());
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = sg.spatial_point(k, t);
  const std::vector<MultiIndex> reads = spatial_dim == 1 ? std::vector<MultiIndex>{{0, 2, 0}}
                                                          : std::vector<MultiIndex>{{0, 2, 0}, {0, 0, 2}};
  const BasisPtr basis = TaylorBasis::closure(spatial_dim == 1 ? std::vector<int>{1, 2} : std::vector<int>{1, 2, 2}, reads);
  const Eigen::MatrixXd c = network_coefficients(params, basis, pts);
  std::vector<Derivatives<double>> d(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) d[k] = derivatives_from_row(basis, c, static_cast<Eigen::Index>(k));
  return energy_from(sg, d, gamma);
}

/// Energy of a closed-form field u(x[,y]) (Taylor form) on a spatial grid.
template <class Field>
double efk_energy_of(const Field& u, int resolution, double gamma, int spatial_dim = 1) {
  const TestGrid sg = spatial_grid(spatial_dim, resolution);
  const BasisPtr basis = spatial_dim == 1 ? TaylorBasis::box({1, 2}) : TaylorBasis::box({1, 2, 2});
  std::vector<Derivatives<double>> d(sg.spatial_size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto in = lift_point(basis, sg.spatial_point(k, 0.0));
    const Taylor<double> zero(basis, 0.0);
    d[k] = derivatives_from(u(in[1], spatial_dim == 2 ? in[2] : zero));
  }
  return energy_from(sg, d, gamma);
}

}  // namespace rwpinn
