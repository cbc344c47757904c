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

#include <array>
#include <cstdint>
#include <vector>

#include "rwpinn/errors.hpp"

namespace rwpinn {

/// Sobol points in [0,1)^dim for dim <= 3, Joe-Kuo direction numbers, Gray
/// code order. The all-zero point at index 0 is skipped, so the sequence
/// starts 0.5, 0.75, 0.25, ... in the first coordinate.
class SobolSequence {
 public:
  static constexpr int kMaxDim = 3;
  static constexpr int kBits = 32;

  explicit SobolSequence(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw ArgumentError("sobol: dimension must be in [1, 3]");
    // (degree s, polynomial coefficients a, initial m_1..m_s); dimension 1 is the identity.
    struct Primitive {
      int s;
      unsigned a;
      std::array<std::uint32_t, 2> m;
    };
    static constexpr std::array<Primitive, 2> kPrimitives{{{1, 0, {1, 0}}, {2, 1, {1, 3}}}};
    for (int i = 0; i < kBits; ++i) v_[0][i] = std::uint32_t{1} << (kBits - 1 - i);
    for (int d = 1; d < dim_; ++d) {
      const auto& p = kPrimitives[d - 1];
      auto& v = v_[d];
      for (int i = 0; i < p.s; ++i) v[i] = p.m[i] << (kBits - 1 - i);
      for (int i = p.s; i < kBits; ++i) {
        v[i] = v[i - p.s] ^ (v[i - p.s] >> p.s);
        for (int k = 1; k < p.s; ++k)
          if ((p.a >> (p.s - 1 - k)) & 1u) v[i] ^= v[i - k];
      }
    }
  }

  int dim() const { return dim_; }

  /// Next point of the sequence.
  std::array<double, kMaxDim> next() {
    // index of the lowest zero bit of the current counter
    std::uint64_t c = count_;
    int bit = 0;
    while (c & 1u) {
      c >>= 1;
      ++bit;
    }
    if (bit >= kBits) throw ArgumentError("sobol: sequence exhausted");
    ++count_;
    std::array<double, kMaxDim> out{};
    for (int d = 0; d < dim_; ++d) {
      state_[d] ^= v_[d][bit];
      out[d] = static_cast<double>(state_[d]) * 0x1p-32;
    }
    return out;
  }

 private:
  int dim_;
  std::uint64_t count_ = 0;
  std::array<std::array<std::uint32_t, kBits>, kMaxDim> v_{};
  std::array<std::uint32_t, kMaxDim> state_{};
};

/// First n Sobol points (after the skipped origin) in [0,1)^dim.
inline std::vector<std::vector<double>> sobol_sequence(int dim, int n) {
  SobolSequence seq(dim);
  std::vector<std::vector<double>> pts;
  pts.reserve(n > 0 ? n : 0);
  for (int i = 0; i < n; ++i) {
    const auto p = seq.next();
    pts.emplace_back(p.begin(), p.begin() + dim);
  }
  return pts;
}

}  // namespace rwpinn
