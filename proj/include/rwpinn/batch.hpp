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

// Batched Taylor propagation through the network with a layer-level adjoint.
//
// Activations of one layer for a batch of B points are stored as a
// (width x nc*B) matrix, nc = basis size, where column k*B + b holds the
// coefficient of multi-index k at point b. Affine maps then act on all
// coefficients at once as a single matrix product; only the constant block
// receives the bias. The tanh layers compose the univariate Taylor series of
// tanh with the incoming truncated polynomial, and backward() replays that
// composition in reverse.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "rwpinn/network.hpp"
#include "rwpinn/taylor.hpp"

namespace rwpinn {

class TaylorBatchEngine {
 public:
  TaylorBatchEngine(std::vector<int> widths, BasisPtr basis) : widths_(std::move(widths)), basis_(std::move(basis)) {
    if (basis_->num_vars() != widths_.front())
      throw ArgumentError("TaylorBatchEngine: basis variables must match the network input dimension");
    const int degree = basis_->max_degree();
    for (int j = 0; j <= degree + 1; ++j)
      poly_.push_back(detail::tanh_derivative_polynomials()[j]);
    inv_fact_.resize(degree + 2);
    for (int j = 0; j <= degree + 1; ++j) inv_fact_[j] = 1.0 / factorial(j);
    // The power p_j of the non-constant part only populates degrees >= j, so
    // restrict each power step to the products whose left factor can be nonzero.
    step_products_.resize(degree + 1);
    for (int j = 2; j <= degree; ++j)
      for (const auto& p : basis_->nonconstant_products())
        if (basis_->degree(p.lhs) >= j - 1) step_products_[j].push_back(p);
  }

  const BasisPtr& basis() const { return basis_; }
  const std::vector<int>& widths() const { return widths_; }

  /// Propagates `points` (input_dim x B). Returns B x nc output coefficients.
  const Eigen::MatrixXd& forward(std::span<const double> theta, const Eigen::Ref<const Eigen::MatrixXd>& points) {
    const Eigen::Index B = points.cols();
    const Eigen::Index nc = static_cast<Eigen::Index>(basis_->size());
    const int layers = static_cast<int>(widths_.size()) - 1;
    batch_ = B;
    post_.resize(layers);
    pre_.resize(layers);
    layer_.resize(layers);

    Eigen::MatrixXd& in = post_[0];
    in.setZero(widths_.front(), nc * B);
    in.leftCols(B) = points;
    for (int v = 0; v < widths_.front(); ++v) {
      const std::size_t k = basis_->linear_index(v);
      if (k != basis_->size()) in.row(v).segment(static_cast<Eigen::Index>(k) * B, B).setOnes();
    }

    std::size_t off = 0;
    for (int k = 0; k < layers; ++k) {
      const int din = widths_[k], dout = widths_[k + 1];
      // Owned copies: products over unaligned maps round differently.
      W_ = Eigen::Map<const RowMatrix>(theta.data() + off, dout, din);
      b_ = Eigen::Map<const Eigen::VectorXd>(theta.data() + off + static_cast<std::size_t>(dout) * din, dout);
      off += static_cast<std::size_t>(din + 1) * dout;
      Eigen::MatrixXd& z = pre_[k];
      z.noalias() = W_ * post_[k];
      z.leftCols(B).colwise() += b_;
      if (k + 1 < layers) {
        tanh_forward(z, layer_[k], post_[k + 1]);
      }
    }
    output_ = Eigen::Map<const Eigen::MatrixXd>(pre_[layers - 1].data(), B, nc);
    return output_;
  }

  /// Accumulates d(loss)/d(theta) into `grad`, given the loss adjoint of the
  /// output coefficients (B x nc, same layout as forward()).
  void backward(std::span<const double> theta, const Eigen::Ref<const Eigen::MatrixXd>& out_adjoint,
                std::span<double> grad) {
    const Eigen::Index B = batch_;
    const Eigen::Index nc = static_cast<Eigen::Index>(basis_->size());
    const int layers = static_cast<int>(widths_.size()) - 1;
    if (out_adjoint.rows() != B || out_adjoint.cols() != nc)
      throw ArgumentError("TaylorBatchEngine::backward: adjoint shape mismatch");

    std::vector<std::size_t> offs{0};
    for (int k = 0; k < layers; ++k)
      offs.push_back(offs.back() + static_cast<std::size_t>(widths_[k] + 1) * widths_[k + 1]);

    Eigen::MatrixXd zbar(1, nc * B);
    Eigen::Map<Eigen::MatrixXd>(zbar.data(), B, nc) = out_adjoint;
    Eigen::MatrixXd abar;
    for (int k = layers - 1; k >= 0; --k) {
      const int din = widths_[k], dout = widths_[k + 1];
      Eigen::Map<RowMatrix> gW(grad.data() + offs[k], dout, din);
      Eigen::Map<Eigen::VectorXd> gb(grad.data() + offs[k] + static_cast<std::size_t>(dout) * din, dout);
      W_.noalias() = zbar * post_[k].transpose();
      gW += W_;
      b_ = zbar.leftCols(B).rowwise().sum();
      gb += b_;
      if (k == 0) break;
      W_ = Eigen::Map<const RowMatrix>(theta.data() + offs[k], dout, din);
      abar.noalias() = W_.transpose() * zbar;
      tanh_backward(pre_[k - 1], layer_[k - 1], abar, zbar);
    }
  }

 private:
  using Array = Eigen::ArrayXXd;

  struct LayerCache {
    std::vector<Array> d;  // d_j = tanh^(j)(a0) / j!, j = 0..degree+1
    std::vector<Eigen::MatrixXd> powers;  // powers[j] = (z - z0)^j, j = 1..degree
  };

  auto block(Eigen::MatrixXd& m, std::size_t k) const {
    return m.middleCols(static_cast<Eigen::Index>(k) * batch_, batch_).array();
  }
  auto block(const Eigen::MatrixXd& m, std::size_t k) const {
    return m.middleCols(static_cast<Eigen::Index>(k) * batch_, batch_).array();
  }

  void tanh_forward(const Eigen::MatrixXd& z, LayerCache& cache, Eigen::MatrixXd& a) {
    const int degree = basis_->max_degree();
    const std::size_t nc = basis_->size();
    // (e - 1) / (e + 1) with e = exp(2 z0): vectorised, absolute error ~1e-16
    const Array e = (2.0 * block(z, 0).min(20.0).max(-20.0)).exp();
    const Array t = (e - 1.0) / (e + 1.0);
    cache.d.resize(degree + 2);
    for (int j = 0; j <= degree + 1; ++j) cache.d[j] = horner(poly_[j], t) * inv_fact_[j];

    a.resize(z.rows(), z.cols());
    block(a, 0) = cache.d[0];
    if (degree == 0) return;
    cache.powers.resize(degree + 1);
    cache.powers[1] = z;
    cache.powers[1].leftCols(batch_).setZero();
    for (int j = 2; j <= degree; ++j) {
      Eigen::MatrixXd& p = cache.powers[j];
      p.resize(z.rows(), z.cols());
      for (std::size_t k = 0; k < nc; ++k)
        if (basis_->degree(k) >= j) block(p, k).setZero();
      for (const auto& pr : step_products_[j]) block(p, pr.out) += block(cache.powers[j - 1], pr.lhs) * block(z, pr.rhs);
    }
    for (std::size_t k = 1; k < nc; ++k) {
      auto ak = block(a, k);
      ak = cache.d[1] * block(cache.powers[1], k);
      for (int j = 2; j <= basis_->degree(k); ++j) ak += cache.d[j] * block(cache.powers[j], k);
    }
  }

  // Given abar (adjoint of the tanh output), overwrite zbar with the adjoint
  // of the tanh input.
  void tanh_backward(const Eigen::MatrixXd& z, const LayerCache& cache, const Eigen::MatrixXd& abar,
                     Eigen::MatrixXd& zbar) {
    const int degree = basis_->max_degree();
    const std::size_t nc = basis_->size();
    const Eigen::Index rows = z.rows();
    dbar_.resize(degree + 1);
    dbar_[0] = block(abar, 0);
    for (int j = 1; j <= degree; ++j) dbar_[j].setZero(rows, batch_);
    zbar.setZero(rows, z.cols());
    if (degree > 0) {
      // pbar_[j] is only read on blocks of degree >= j, all of which are
      // assigned here before the power chain accumulates into them.
      pbar_.resize(degree + 1);
      for (int j = 1; j <= degree; ++j) pbar_[j].resize(rows, z.cols());
      for (std::size_t k = 1; k < nc; ++k) {
        const auto ab = block(abar, k);
        for (int j = 1; j <= basis_->degree(k); ++j) {
          dbar_[j] += ab * block(cache.powers[j], k);
          block(pbar_[j], k) = cache.d[j] * ab;
        }
      }
      // zbar's non-constant blocks accumulate the adjoint of h = z - z0.
      for (int j = degree; j >= 2; --j) {
        for (const auto& pr : step_products_[j]) {
          const auto pb = block(pbar_[j], pr.out);
          block(pbar_[j - 1], pr.lhs) += pb * block(z, pr.rhs);
          block(zbar, pr.rhs) += pb * block(cache.powers[j - 1], pr.lhs);
        }
      }
      zbar.rightCols(zbar.cols() - batch_) += pbar_[1].rightCols(zbar.cols() - batch_);
    }
    auto z0bar = block(zbar, 0);
    z0bar = dbar_[0] * cache.d[1];
    for (int j = 1; j <= degree; ++j) z0bar += dbar_[j] * cache.d[j + 1] * static_cast<double>(j + 1);
  }

  static Array horner(const std::vector<double>& c, const Array& x) {
    Array r = Array::Constant(x.rows(), x.cols(), c.back());
    for (std::size_t i = c.size() - 1; i-- > 0;) r = r * x + c[i];
    return r;
  }

  std::vector<int> widths_;
  BasisPtr basis_;
  std::vector<std::vector<double>> poly_;
  std::vector<double> inv_fact_;
  std::vector<std::vector<TaylorBasis::Product>> step_products_;

  Eigen::Index batch_ = 0;
  std::vector<Eigen::MatrixXd> pre_;   // pre_[k]: input of layer k's activation (output of affine k)
  std::vector<Eigen::MatrixXd> post_;  // post_[k]: input of affine k
  std::vector<LayerCache> layer_;
  Eigen::MatrixXd output_;
  RowMatrix W_;
  Eigen::VectorXd b_;
  std::vector<Array> dbar_;
  std::vector<Eigen::MatrixXd> pbar_;
};

}  // namespace rwpinn
