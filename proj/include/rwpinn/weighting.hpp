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

// Residual-based weights: each interior residual is scaled by a weight that
// is a decreasing function of its own value, held constant under
// differentiation.

#include <cmath>
#include <string>

#include "rwpinn/errors.hpp"
#include "rwpinn/taylor.hpp"

namespace rwpinn {

enum class WeightKind { None, RWa, RWb };

struct WeightScheme {
  WeightKind kind = WeightKind::None;
  double scale = 1.0;

  void validate() const {
    if (kind != WeightKind::None && !(scale > 0.0 && scale <= 1.0))
      throw ArgumentError("weight scale must lie in (0, 1]");
  }
};

inline WeightKind parse_method(const std::string& method) {
  if (method == "pinn") return WeightKind::None;
  if (method == "rwa") return WeightKind::RWa;
  if (method == "rwb") return WeightKind::RWb;
  throw ArgumentError("unknown method '" + method + "' (expected pinn, rwa or rwb)");
}

inline std::string method_name(WeightKind kind) {
  switch (kind) {
    case WeightKind::None: return "pinn";
    case WeightKind::RWa: return "rwa";
    case WeightKind::RWb: return "rwb";
  }
  return "?";
}

/// log(1 + e^z) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

/// 1 / (1 + e^-z) without overflow.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// None: 1.  RWa: sigmoid(-s r).  RWb: tanh(softplus(-s r)).
inline double weight(const WeightScheme& scheme, double residual) {
  switch (scheme.kind) {
    case WeightKind::None: return 1.0;
    case WeightKind::RWa: return sigmoid(-scheme.scale * residual);
    case WeightKind::RWb: return std::tanh(softplus(-scheme.scale * residual));
  }
  return 1.0;
}

/// W(r) * r, with W evaluated on the plain value of r only.
template <class S>
S weighted_interior_residual(const WeightScheme& scheme, const S& residual) {
  if (scheme.kind == WeightKind::None) return residual;
  return residual * weight(scheme, value_of(residual));
}

}  // namespace rwpinn
