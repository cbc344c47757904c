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

// Fully-connected tanh network u_theta: (t, x[, y]) -> R.
//
// Parameters live in one flat vector, layer-major; each layer stores its
// weight matrix row-major (d_out x d_in) followed by its bias (d_out).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwpinn/errors.hpp"
#include "rwpinn/taylor.hpp"

namespace rwpinn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct NetworkConfig {
  int hidden_layers = 4;  // K - 1
  int width = 20;
  std::uint64_t seed = 0;

  void validate() const {
    if (hidden_layers < 1) throw ArgumentError("NetworkConfig: hidden_layers must be >= 1");
    if (width < 1) throw ArgumentError("NetworkConfig: width must be >= 1");
  }
};

/// Layer widths (d_1 = input_dim, hidden..., d_K = 1).
inline std::vector<int> layer_widths(const NetworkConfig& config, int input_dim) {
  config.validate();
  std::vector<int> w{input_dim};
  for (int k = 0; k < config.hidden_layers; ++k) w.push_back(config.width);
  w.push_back(1);
  return w;
}

/// sum_k (d_k + 1) d_{k+1}
inline std::size_t parameter_count(std::span<const int> widths) {
  std::size_t n = 0;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k)
    n += static_cast<std::size_t>(widths[k] + 1) * static_cast<std::size_t>(widths[k + 1]);
  return n;
}

class NetworkParams {
 public:
  NetworkParams() = default;

  explicit NetworkParams(std::vector<int> widths) : widths_(std::move(widths)) {
    validate_widths();
    theta_.assign(parameter_count(widths_), 0.0);
  }

  NetworkParams(std::vector<int> widths, std::vector<double> theta)
      : widths_(std::move(widths)), theta_(std::move(theta)) {
    validate_widths();
    if (theta_.size() != parameter_count(widths_))
      throw ArgumentError("NetworkParams: parameter vector has " + std::to_string(theta_.size()) +
                          " entries, widths need " + std::to_string(parameter_count(widths_)));
  }

  const std::vector<int>& widths() const { return widths_; }
  int input_dim() const { return widths_.front(); }
  int num_layers() const { return static_cast<int>(widths_.size()) - 1; }
  std::size_t size() const { return theta_.size(); }

  std::span<const double> flat() const { return theta_; }
  std::span<double> flat() { return theta_; }

  std::size_t weight_offset(int layer) const { return offsets()[layer]; }
  std::size_t bias_offset(int layer) const {
    return weight_offset(layer) + static_cast<std::size_t>(widths_[layer + 1]) * widths_[layer];
  }

  Eigen::Map<const RowMatrix> weight(int layer) const {
    return {theta_.data() + weight_offset(layer), widths_[layer + 1], widths_[layer]};
  }
  Eigen::Map<RowMatrix> weight(int layer) {
    return {theta_.data() + weight_offset(layer), widths_[layer + 1], widths_[layer]};
  }
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const {
    return {theta_.data() + bias_offset(layer), widths_[layer + 1]};
  }
  Eigen::Map<Eigen::VectorXd> bias(int layer) { return {theta_.data() + bias_offset(layer), widths_[layer + 1]}; }

  bool operator==(const NetworkParams&) const = default;

 private:
  void validate_widths() const {
    if (widths_.size() < 3) throw ArgumentError("NetworkParams: need at least one hidden layer");
    for (int w : widths_)
      if (w < 1) throw ArgumentError("NetworkParams: layer widths must be positive");
    if (widths_.back() != 1) throw ArgumentError("NetworkParams: output layer must be scalar");
  }

  std::vector<std::size_t> offsets() const {
    std::vector<std::size_t> o{0};
    for (std::size_t k = 0; k + 1 < widths_.size(); ++k)
      o.push_back(o.back() + static_cast<std::size_t>(widths_[k] + 1) * widths_[k + 1]);
    return o;
  }

  std::vector<int> widths_;
  std::vector<double> theta_;
};

/// Xavier/Glorot-uniform weights, zero biases; fully determined by the seed.
inline NetworkParams init_params(const NetworkConfig& config, int input_dim) {
  NetworkParams p(layer_widths(config, input_dim));
  std::mt19937_64 rng(config.seed);
  for (int k = 0; k < p.num_layers(); ++k) {
    const auto& w = p.widths();
    const double bound = std::sqrt(6.0 / (w[k] + w[k + 1]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto W = p.weight(k);
    for (Eigen::Index i = 0; i < W.rows(); ++i)
      for (Eigen::Index j = 0; j < W.cols(); ++j) W(i, j) = dist(rng);
  }
  return p;
}

/// u_theta on Taylor inputs. Works for double parameters and for tape
/// variables (parameter-tracked coefficients).
template <class S>
Taylor<S> forward(std::span<const S> theta, std::span<const int> widths, std::span<const Taylor<S>> input) {
  if (input.size() != static_cast<std::size_t>(widths.front()))
    throw ArgumentError("forward: input has " + std::to_string(input.size()) + " entries, network expects " +
                        std::to_string(widths.front()));
  if (theta.size() != parameter_count(widths)) throw ArgumentError("forward: parameter count mismatch");
  const BasisPtr& basis = input.front().basis();
  std::vector<Taylor<S>> z(input.begin(), input.end());
  std::size_t off = 0;
  const std::size_t layers = widths.size() - 1;
  for (std::size_t k = 0; k < layers; ++k) {
    const int din = widths[k], dout = widths[k + 1];
    std::vector<Taylor<S>> next;
    next.reserve(dout);
    for (int i = 0; i < dout; ++i) {
      Taylor<S> acc(basis, theta[off + static_cast<std::size_t>(dout) * din + i]);
      for (int j = 0; j < din; ++j) acc += z[j] * theta[off + static_cast<std::size_t>(i) * din + j];
      next.push_back(k + 1 < layers ? tanh(acc) : std::move(acc));
    }
    off += static_cast<std::size_t>(din + 1) * dout;
    z = std::move(next);
  }
  return z.front();
}

inline Taylor<double> forward(const NetworkParams& params, std::span<const Taylor<double>> input) {
  return forward<double>(params.flat(), params.widths(), input);
}

/// Plain evaluation at many points; `points` is input_dim x B.
inline Eigen::VectorXd evaluate(const NetworkParams& params, const Eigen::Ref<const Eigen::MatrixXd>& points) {
  if (points.rows() != params.input_dim()) throw ArgumentError("evaluate: point dimension mismatch");
  Eigen::MatrixXd a = points;
  for (int k = 0; k < params.num_layers(); ++k) {
    const RowMatrix W = params.weight(k);
    Eigen::MatrixXd z = W * a;
    z.colwise() += params.bias(k);
    if (k + 1 < params.num_layers())
      a = z.array().tanh().matrix();
    else
      a = std::move(z);
  }
  return a.row(0).transpose();
}

inline double forward(const NetworkParams& params, std::span<const double> input) {
  if (input.size() != static_cast<std::size_t>(params.input_dim()))
    throw ArgumentError("forward: input dimension mismatch");
  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(input.data(), static_cast<Eigen::Index>(input.size()));
  return evaluate(params, p)(0);
}

inline nlohmann::json to_json(const NetworkParams& p) {
  return {{"widths", p.widths()}, {"theta", std::vector<double>(p.flat().begin(), p.flat().end())}};
}

inline NetworkParams params_from_json(const nlohmann::json& j) {
  return NetworkParams(j.at("widths").get<std::vector<int>>(), j.at("theta").get<std::vector<double>>());
}

/// Binary checkpoint: int32 layer count, int32 widths, then float64 theta.
inline void write_binary(const NetworkParams& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open " + path + " for writing");
  const auto n = static_cast<std::int32_t>(p.widths().size());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (int w : p.widths()) {
    const auto w32 = static_cast<std::int32_t>(w);
    out.write(reinterpret_cast<const char*>(&w32), sizeof w32);
  }
  out.write(reinterpret_cast<const char*>(p.flat().data()), static_cast<std::streamsize>(p.size() * sizeof(double)));
}

inline NetworkParams read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path);
  std::int32_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n < 3 || n > 64) throw ArgumentError("corrupt checkpoint " + path);
  std::vector<int> widths(n);
  for (auto& w : widths) {
    std::int32_t w32 = 0;
    in.read(reinterpret_cast<char*>(&w32), sizeof w32);
    w = w32;
  }
  std::vector<double> theta(parameter_count(widths));
  in.read(reinterpret_cast<char*>(theta.data()), static_cast<std::streamsize>(theta.size() * sizeof(double)));
  if (!in) throw ArgumentError("truncated checkpoint " + path);
  return NetworkParams(std::move(widths), std::move(theta));
}

}  // namespace rwpinn
