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

#include "rwpinn/errors.hpp"

namespace rwpinn {

/// Space-time domain [0,T] x [0,1]^d.
struct DomainSpec {
  int spatial_dim = 1;
  double T = 1.0;

  void validate() const {
    if (spatial_dim != 1 && spatial_dim != 2) throw ArgumentError("DomainSpec: spatial_dim must be 1 or 2");
    if (!(T > 0.0)) throw ArgumentError("DomainSpec: T must be positive");
  }
  int input_dim() const { return spatial_dim + 1; }
  int num_faces() const { return 2 * spatial_dim; }
  double spatial_measure() const { return 1.0; }
  /// Measure of the spatial boundary: two points in 1D, the unit-square perimeter in 2D.
  double boundary_measure() const { return spatial_dim == 1 ? 2.0 : 4.0; }
  double spacetime_measure() const { return T * spatial_measure(); }
};

struct Point {
  double t = 0.0, x = 0.0, y = 0.0;

  double operator[](int var) const { return var == 0 ? t : (var == 1 ? x : y); }
  double& operator[](int var) { return var == 0 ? t : (var == 1 ? x : y); }
};

/// Faces of [0,1]^d: 0 -> x=0, 1 -> x=1, 2 -> y=0, 3 -> y=1.
inline int face_axis(int face) { return 1 + face / 2; }
inline double face_coordinate(int face) { return face % 2 == 0 ? 0.0 : 1.0; }

}  // namespace rwpinn
