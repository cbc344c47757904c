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

// Quadrature-weighted PINN losses. `assemble_loss` is the direct scalar
// route (any coefficient type, including tape variables); `LossModel` is the
// batched route used for training.

#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rwpinn/batch.hpp"
#include "rwpinn/errors.hpp"
#include "rwpinn/network.hpp"
#include "rwpinn/problems.hpp"
#include "rwpinn/sampling.hpp"
#include "rwpinn/tape.hpp"
#include "rwpinn/weighting.hpp"

namespace rwpinn {

/// Loss terms. `interior` uses the weighted residual; `interior_raw` is the
/// same sum with the weights set to one.
template <class S>
struct LossTerms {
  S interior{0.0}, interior_raw{0.0}, sb{0.0}, tb{0.0}, data{0.0}, reg{0.0}, total{0.0};
};

struct LossBreakdown {
  double interior = 0.0;
  double interior_raw = 0.0;
  double sb = 0.0;
  double tb = 0.0;
  double data = 0.0;
  double reg = 0.0;
  double total = 0.0;
  double lambda = 1.0;
  double lambda_reg = 0.0;

  /// Combined training error: root of the summed family errors, lambda-free.
  double training_error() const { return std::sqrt(interior + sb + tb + data); }
};

namespace detail {
inline std::string describe_point(const char* family, std::size_t j, const Point& p) {
  std::ostringstream os;
  os << family << "[" << j << "] at (t=" << p.t << ", x=" << p.x << ", y=" << p.y << ")";
  return os.str();
}

inline void check_finite(double v, const char* family, std::size_t j, const Point& p) {
  if (!std::isfinite(v)) throw NumericError(describe_point(family, j, p), v);
}
}  // namespace detail

template <class S>
LossTerms<S> assemble_loss(const ProblemSpec& p, std::span<const S> theta, std::span<const int> widths,
                           const TrainingSet& set, const WeightScheme& scheme, double lambda,
                           double lambda_reg = 0.0) {
  LossTerms<S> L;
  const BasisPtr ib = interior_basis(p.op);
  for (std::size_t j = 0; j < set.interior.size(); ++j) {
    const Sample& s = set.interior[j];
    const auto in = lift_point<S>(ib, s.point);
    const S r = interior_residual(p, derivatives_from(forward<S>(theta, widths, in)), s.point);
    detail::check_finite(value_of(r), "interior", j, s.point);
    const S rw = weighted_interior_residual(scheme, r);
    L.interior = L.interior + s.weight * rw * rw;
    L.interior_raw = L.interior_raw + s.weight * r * r;
  }
  if (p.mode == Mode::Forward) {
    const BasisPtr bb = boundary_basis(p);
    for (std::size_t j = 0; j < set.spatial_boundary.size(); ++j) {
      const Sample& s = set.spatial_boundary[j];
      const auto in = lift_point<S>(bb, s.point);
      for (const S& r : boundary_residuals(p, derivatives_from(forward<S>(theta, widths, in)), s.face, s.point)) {
        detail::check_finite(value_of(r), "spatial_boundary", j, s.point);
        L.sb = L.sb + s.weight * r * r;
      }
    }
    const BasisPtr vb = value_basis(p.domain.input_dim());
    for (std::size_t j = 0; j < set.temporal_boundary.size(); ++j) {
      const Sample& s = set.temporal_boundary[j];
      const auto in = lift_point<S>(vb, s.point);
      const S r = temporal_residual(p, forward<S>(theta, widths, in).value(), s.point);
      detail::check_finite(value_of(r), "temporal_boundary", j, s.point);
      L.tb = L.tb + s.weight * r * r;
    }
  }
  const BasisPtr vb = value_basis(p.domain.input_dim());
  for (std::size_t j = 0; j < set.data.size(); ++j) {
    const Sample& s = set.data[j];
    const auto in = lift_point<S>(vb, s.point);
    const S r = forward<S>(theta, widths, in).value() - s.observed;
    detail::check_finite(value_of(r), "data", j, s.point);
    L.data = L.data + s.weight * r * r;
  }
  if (lambda_reg > 0.0)
    for (const S& t : theta) L.reg = L.reg + t * t;
  L.total = L.sb + L.tb + L.data + lambda * L.interior + lambda_reg * L.reg;
  return L;
}

template <class S>
LossBreakdown to_breakdown(const LossTerms<S>& L, double lambda, double lambda_reg) {
  return {value_of(L.interior), value_of(L.interior_raw), value_of(L.sb), value_of(L.tb), value_of(L.data),
          value_of(L.reg),      value_of(L.total),        lambda,         lambda_reg};
}

/// Batched loss and gradient over a fixed training set.
class LossModel {
 public:
  static constexpr Eigen::Index kChunk = 16;

  LossModel(ProblemSpec problem, std::vector<int> widths, const TrainingSet& set, WeightScheme scheme,
            double lambda, double lambda_reg = 0.0)
      : problem_(std::move(problem)),
        widths_(std::move(widths)),
        scheme_(scheme),
        lambda_(lambda),
        lambda_reg_(lambda_reg),
        interior_(widths_, interior_basis(problem_.op)),
        boundary_(widths_, boundary_basis(problem_)),
        value_(widths_, value_basis(problem_.domain.input_dim())) {
    scheme_.validate();
    if (!(lambda >= 0.0) || !(lambda_reg >= 0.0)) throw ArgumentError("LossModel: multipliers must be nonnegative");
    if (widths_.front() != problem_.domain.input_dim())
      throw ArgumentError("LossModel: network input dimension does not match the problem");
    load(set.interior, interior_set_);
    for (const Sample& s : set.interior) interior_set_.target.push_back(problem_.source ? problem_.source(s.point) : 0.0);
    if (problem_.mode == Mode::Forward) {
      load(set.spatial_boundary, boundary_set_);
      for (const Sample& s : set.spatial_boundary) {
        boundary_set_.target.push_back(problem_.boundary_value(s.face, s.point));
        boundary_set_.target2.push_back(problem_.has_laplacian_trace() ? problem_.boundary_laplacian(s.face, s.point)
                                                                       : 0.0);
      }
      load(set.temporal_boundary, temporal_set_);
      for (const Sample& s : set.temporal_boundary) temporal_set_.target.push_back(problem_.initial(s.point));
    }
    load(set.data, data_set_);
    for (const Sample& s : set.data) data_set_.target.push_back(s.observed);

    const BasisPtr& ib = interior_.basis();
    for (int s = 0; s < kNumDerivativeSlots; ++s) {
      const MultiIndex& m = derivative_slot_index(s);
      if (ib->contains(m)) slots_.push_back({s, ib->find(m), factorial_product(m)});
    }
    const BasisPtr& bb = boundary_.basis();
    for (const MultiIndex m : {MultiIndex{0, 2, 0}, MultiIndex{0, 0, 2}})
      if (problem_.has_laplacian_trace() && bb->contains(m)) laplacian_.push_back(bb->find(m));
  }

  const ProblemSpec& problem() const { return problem_; }
  const std::vector<int>& widths() const { return widths_; }
  std::size_t dimension() const { return parameter_count(widths_); }
  double lambda() const { return lambda_; }
  const WeightScheme& scheme() const { return scheme_; }

  /// Loss terms; when `grad` is non-empty it receives d(total)/d(theta).
  LossBreakdown evaluate(std::span<const double> theta, std::span<double> grad = {}) {
    if (theta.size() != dimension()) throw ArgumentError("LossModel: parameter count mismatch");
    const bool want_grad = !grad.empty();
    if (want_grad) {
      if (grad.size() != theta.size()) throw ArgumentError("LossModel: gradient size mismatch");
      std::fill(grad.begin(), grad.end(), 0.0);
    }
    LossBreakdown L;
    L.lambda = lambda_;
    L.lambda_reg = lambda_reg_;
    interior_pass(theta, grad, want_grad, L);
    boundary_pass(theta, grad, want_grad, L);
    value_pass(temporal_set_, "temporal_boundary", theta, grad, want_grad, L.tb);
    value_pass(data_set_, "data", theta, grad, want_grad, L.data);
    if (lambda_reg_ > 0.0) {
      for (std::size_t k = 0; k < theta.size(); ++k) {
        L.reg += theta[k] * theta[k];
        if (want_grad) grad[k] += 2.0 * lambda_reg_ * theta[k];
      }
    }
    L.total = L.sb + L.tb + L.data + lambda_ * L.interior + lambda_reg_ * L.reg;
    if (!std::isfinite(L.total)) throw NumericError("loss", L.total);
    return L;
  }

  /// Holds the interior weights at their values for `theta` until
  /// thaw_weights(); the loss is then a smooth function whose gradient is
  /// exactly the detached-weight gradient.
  void freeze_weights(std::span<const double> theta) {
    if (scheme_.kind == WeightKind::None) return;
    const std::vector<double> r = interior_residuals(theta);
    frozen_.resize(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) frozen_[j] = weight(scheme_, r[j]);
  }
  void thaw_weights() { frozen_.clear(); }
  bool weights_frozen() const { return !frozen_.empty(); }

  /// Unweighted interior residuals at every interior point.
  std::vector<double> interior_residuals(std::span<const double> theta) {
    std::vector<double> r;
    r.reserve(interior_set_.weight.size());
    for_chunks(interior_set_, [&](Eigen::Index begin, Eigen::Index n) {
      const Eigen::MatrixXd& out = interior_.forward(theta, interior_set_.points.middleCols(begin, n));
      for (Eigen::Index j = 0; j < n; ++j) r.push_back(interior_value(out, j, begin + j));
    });
    return r;
  }

 private:
  struct Family {
    Eigen::MatrixXd points;
    std::vector<double> weight, target, target2;
    std::vector<int> face;
    std::vector<Point> raw;
  };
  struct Slot {
    int slot;
    std::size_t coeff;
    double factor;
  };

  void load(const std::vector<Sample>& samples, Family& f) const {
    const int dim = problem_.domain.input_dim();
    f.points.resize(dim, static_cast<Eigen::Index>(samples.size()));
    for (std::size_t j = 0; j < samples.size(); ++j) {
      for (int v = 0; v < dim; ++v) f.points(v, static_cast<Eigen::Index>(j)) = samples[j].point[v];
      f.weight.push_back(samples[j].weight);
      f.face.push_back(samples[j].face);
      f.raw.push_back(samples[j].point);
    }
  }

  template <class Fn>
  static void for_chunks(const Family& f, Fn&& fn) {
    const Eigen::Index N = f.points.cols();
    for (Eigen::Index begin = 0; begin < N; begin += kChunk) fn(begin, std::min(kChunk, N - begin));
  }

  double interior_value(const Eigen::MatrixXd& out, Eigen::Index j, Eigen::Index global) const {
    Derivatives<double> d;
    for (const Slot& s : slots_) derivative_slot(d, s.slot) = out(j, static_cast<Eigen::Index>(s.coeff)) * s.factor;
    return interior_operator(problem_, d) - interior_set_.target[static_cast<std::size_t>(global)];
  }

  void interior_pass(std::span<const double> theta, std::span<double> grad, bool want_grad, LossBreakdown& L) {
    const Eigen::Index nc = static_cast<Eigen::Index>(interior_.basis()->size());
    std::vector<Var> c(static_cast<std::size_t>(nc));
    for_chunks(interior_set_, [&](Eigen::Index begin, Eigen::Index n) {
      const Eigen::MatrixXd& out = interior_.forward(theta, interior_set_.points.middleCols(begin, n));
      if (want_grad) adjoint_.setZero(n, nc);
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto g = static_cast<std::size_t>(begin + j);
        const double w = interior_set_.weight[g];
        double r;
        std::vector<double> dr;
        if (want_grad) {
          tape_.reset();
          for (Eigen::Index k = 0; k < nc; ++k) c[static_cast<std::size_t>(k)] = tape_.variable(out(j, k));
          Derivatives<Var> d;
          for (const Slot& s : slots_) derivative_slot(d, s.slot) = c[s.coeff] * s.factor;
          const Var rv = interior_operator(problem_, d) - interior_set_.target[g];
          r = rv.value();
          detail::check_finite(r, "interior", g, interior_set_.raw[g]);
          dr = tape_.gradient(rv, c);
        } else {
          r = interior_value(out, j, begin + j);
          detail::check_finite(r, "interior", g, interior_set_.raw[g]);
        }
        const double W = frozen_.empty() ? weight(scheme_, r) : frozen_[g];
        L.interior += w * W * W * r * r;
        L.interior_raw += w * r * r;
        if (want_grad) {
          const double f = 2.0 * lambda_ * w * W * W * r;
          for (Eigen::Index k = 0; k < nc; ++k) adjoint_(j, k) = f * dr[static_cast<std::size_t>(k)];
        }
      }
      if (want_grad) interior_.backward(theta, adjoint_, grad);
    });
  }

  void boundary_pass(std::span<const double> theta, std::span<double> grad, bool want_grad, LossBreakdown& L) {
    if (boundary_set_.weight.empty()) return;
    const Eigen::Index nc = static_cast<Eigen::Index>(boundary_.basis()->size());
    for_chunks(boundary_set_, [&](Eigen::Index begin, Eigen::Index n) {
      const Eigen::MatrixXd& out = boundary_.forward(theta, boundary_set_.points.middleCols(begin, n));
      if (want_grad) adjoint_.setZero(n, nc);
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto g = static_cast<std::size_t>(begin + j);
        const double w = boundary_set_.weight[g];
        const double r0 = out(j, 0) - boundary_set_.target[g];
        detail::check_finite(r0, "spatial_boundary", g, boundary_set_.raw[g]);
        L.sb += w * r0 * r0;
        if (want_grad) adjoint_(j, 0) = 2.0 * w * r0;
        if (laplacian_.empty()) continue;
        double lap = 0.0;
        for (std::size_t k : laplacian_) lap += 2.0 * out(j, static_cast<Eigen::Index>(k));
        const double r1 = lap - boundary_set_.target2[g];
        detail::check_finite(r1, "spatial_boundary", g, boundary_set_.raw[g]);
        L.sb += w * r1 * r1;
        if (want_grad)
          for (std::size_t k : laplacian_) adjoint_(j, static_cast<Eigen::Index>(k)) = 2.0 * w * r1 * 2.0;
      }
      if (want_grad) boundary_.backward(theta, adjoint_, grad);
    });
  }

  void value_pass(const Family& f, const char* name, std::span<const double> theta, std::span<double> grad,
                  bool want_grad, double& term) {
    if (f.weight.empty()) return;
    for_chunks(f, [&](Eigen::Index begin, Eigen::Index n) {
      const Eigen::MatrixXd& out = value_.forward(theta, f.points.middleCols(begin, n));
      if (want_grad) adjoint_.setZero(n, 1);
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto g = static_cast<std::size_t>(begin + j);
        const double r = out(j, 0) - f.target[g];
        detail::check_finite(r, name, g, f.raw[g]);
        term += f.weight[g] * r * r;
        if (want_grad) adjoint_(j, 0) = 2.0 * f.weight[g] * r;
      }
      if (want_grad) value_.backward(theta, adjoint_, grad);
    });
  }

  ProblemSpec problem_;
  std::vector<int> widths_;
  WeightScheme scheme_;
  double lambda_, lambda_reg_;
  TaylorBatchEngine interior_, boundary_, value_;
  Family interior_set_, boundary_set_, temporal_set_, data_set_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> laplacian_;
  Eigen::MatrixXd adjoint_;
  AdjointTape tape_;
  std::vector<double> frozen_;
};

}  // namespace rwpinn
