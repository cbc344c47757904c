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

// Reverse-mode tape over scalar elementary operations.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rwpinn/errors.hpp"

namespace rwpinn {

class AdjointTape;

/// A real number that may be recorded on an AdjointTape. A default or
/// double-constructed Var is a constant and records nothing.
class Var {
 public:
  Var() = default;
  Var(double v) : value_(v) {}  // NOLINT: implicit constants keep templates generic

  double value() const { return value_; }
  bool is_constant() const { return tape_ == nullptr; }
  AdjointTape* tape() const { return tape_; }
  std::int32_t id() const { return id_; }

 private:
  friend class AdjointTape;
  Var(AdjointTape* tape, std::int32_t id, double v) : tape_(tape), id_(id), value_(v) {}

  AdjointTape* tape_ = nullptr;
  std::int32_t id_ = -1;
  double value_ = 0.0;
};

inline double value_of(const Var& v) { return v.value(); }

/// Node list of elementary operations with local partials. One backward pass
/// is allowed per recording; reset() starts a new recording.
class AdjointTape {
 public:
  AdjointTape() = default;
  AdjointTape(const AdjointTape&) = delete;
  AdjointTape& operator=(const AdjointTape&) = delete;

  /// Registers an independent input.
  Var variable(double value) { return push(value, -1, 0.0, -1, 0.0); }

  Var record(double value, const Var& a, double da) { return record(value, a, da, Var(), 0.0); }

  Var record(double value, const Var& a, double da, const Var& b, double db) {
    const std::int32_t ia = owned_id(a), ib = owned_id(b);
    if (ia < 0 && ib < 0) return Var(value);
    return push(value, ia, da, ib, db);
  }

  /// d output / d inputs[k] for each k. Consumes the tape.
  std::vector<double> gradient(const Var& output, std::span<const Var> inputs) {
    if (consumed_) throw ContractError("AdjointTape: backward pass already run on this recording");
    consumed_ = true;
    std::vector<double> result(inputs.size(), 0.0);
    if (output.is_constant()) return result;
    if (output.tape() != this) throw ArgumentError("AdjointTape: output recorded on another tape");
    adjoint_.assign(nodes_.size(), 0.0);
    adjoint_[output.id()] = 1.0;
    for (std::size_t n = static_cast<std::size_t>(output.id()) + 1; n-- > 0;) {
      const double g = adjoint_[n];
      if (g == 0.0) continue;
      const Node& node = nodes_[n];
      if (node.a >= 0) adjoint_[node.a] += g * node.da;
      if (node.b >= 0) adjoint_[node.b] += g * node.db;
    }
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      if (inputs[k].is_constant()) continue;
      if (inputs[k].tape() != this) throw ArgumentError("AdjointTape: input recorded on another tape");
      result[k] = adjoint_[inputs[k].id()];
    }
    return result;
  }

  void reset() {
    nodes_.clear();
    consumed_ = false;
  }

  std::size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

 private:
  struct Node {
    std::int32_t a, b;
    double da, db;
  };

  std::int32_t owned_id(const Var& v) const {
    if (v.is_constant()) return -1;
    if (v.tape() != this) throw ArgumentError("AdjointTape: mixing variables from different tapes");
    return v.id();
  }

  Var push(double value, std::int32_t a, double da, std::int32_t b, double db) {
    if (consumed_) throw ContractError("AdjointTape: recording on a consumed tape, call reset()");
    nodes_.push_back({a, b, da, db});
    return Var(this, static_cast<std::int32_t>(nodes_.size() - 1), value);
  }

  std::vector<Node> nodes_;
  std::vector<double> adjoint_;
  bool consumed_ = false;
};

namespace detail {
inline AdjointTape* tape_of(const Var& a, const Var& b) { return a.tape() ? a.tape() : b.tape(); }
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  AdjointTape* t = detail::tape_of(a, b);
  return t ? t->record(a.value() + b.value(), a, 1.0, b, 1.0) : Var(a.value() + b.value());
}
inline Var operator-(const Var& a, const Var& b) {
  AdjointTape* t = detail::tape_of(a, b);
  return t ? t->record(a.value() - b.value(), a, 1.0, b, -1.0) : Var(a.value() - b.value());
}
inline Var operator*(const Var& a, const Var& b) {
  AdjointTape* t = detail::tape_of(a, b);
  return t ? t->record(a.value() * b.value(), a, b.value(), b, a.value()) : Var(a.value() * b.value());
}
inline Var operator/(const Var& a, const Var& b) {
  const double q = a.value() / b.value();
  AdjointTape* t = detail::tape_of(a, b);
  return t ? t->record(q, a, 1.0 / b.value(), b, -q / b.value()) : Var(q);
}
inline Var operator-(const Var& a) { return a.tape() ? a.tape()->record(-a.value(), a, -1.0) : Var(-a.value()); }

inline Var operator+(const Var& a, double b) { return a + Var(b); }
inline Var operator+(double a, const Var& b) { return Var(a) + b; }
inline Var operator-(const Var& a, double b) { return a - Var(b); }
inline Var operator-(double a, const Var& b) { return Var(a) - b; }
inline Var operator*(const Var& a, double b) { return a * Var(b); }
inline Var operator*(double a, const Var& b) { return Var(a) * b; }
inline Var operator/(const Var& a, double b) { return a / Var(b); }
inline Var operator/(double a, const Var& b) { return Var(a) / b; }

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

namespace detail {
inline Var unary(const Var& a, double value, double partial) {
  return a.tape() ? a.tape()->record(value, a, partial) : Var(value);
}
}  // namespace detail

inline Var exp(const Var& a) {
  const double e = std::exp(a.value());
  return detail::unary(a, e, e);
}
inline Var log(const Var& a) { return detail::unary(a, std::log(a.value()), 1.0 / a.value()); }
inline Var sin(const Var& a) { return detail::unary(a, std::sin(a.value()), std::cos(a.value())); }
inline Var cos(const Var& a) { return detail::unary(a, std::cos(a.value()), -std::sin(a.value())); }
inline Var tanh(const Var& a) {
  const double t = std::tanh(a.value());
  return detail::unary(a, t, 1.0 - t * t);
}
inline Var sqrt(const Var& a) {
  const double s = std::sqrt(a.value());
  return detail::unary(a, s, 0.5 / s);
}
inline Var pow(const Var& a, double p) {
  return detail::unary(a, std::pow(a.value(), p), p * std::pow(a.value(), p - 1.0));
}

struct GradientResult {
  double loss = 0.0;
  std::vector<double> gradient;
};

/// Gradient of a scalar loss with respect to every parameter. `evaluate`
/// receives the parameters as tape variables and returns the loss.
template <class Evaluator>
GradientResult loss_gradient(Evaluator&& evaluate, std::span<const double> params) {
  AdjointTape tape;
  std::vector<Var> theta;
  theta.reserve(params.size());
  for (double p : params) theta.push_back(tape.variable(p));
  const Var loss = evaluate(std::span<const Var>(theta));
  if (!std::isfinite(loss.value())) throw NumericError("loss", loss.value());
  GradientResult result{loss.value(), tape.gradient(loss, theta)};
  for (std::size_t k = 0; k < result.gradient.size(); ++k)
    if (!std::isfinite(result.gradient[k]))
      throw NumericError("gradient[" + std::to_string(k) + "]", result.gradient[k]);
  return result;
}

}  // namespace rwpinn
