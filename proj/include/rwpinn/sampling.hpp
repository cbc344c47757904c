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

// Training-point families with Monte-Carlo weights, and trapezoid test grids.

#include <cstdint>
#include <cstring>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "rwpinn/domain.hpp"
#include "rwpinn/errors.hpp"
#include "rwpinn/problems.hpp"
#include "rwpinn/sobol.hpp"

namespace rwpinn {

enum class SamplingStrategy { Sobol, Random };

struct SamplerConfig {
  SamplingStrategy strategy = SamplingStrategy::Sobol;
  int n_int = 2048;
  int n_sb = 512;
  int n_tb = 512;
  int n_d = 0;
  std::uint64_t seed = 0;

  void validate(const ProblemSpec& p) const {
    if (n_int <= 128) throw ArgumentError("sampler: N_int must exceed 128");
    if (p.mode == Mode::Forward) {
      if (n_sb <= 64 || n_tb <= 64) throw ArgumentError("sampler: N_sb and N_tb must exceed 64");
    } else if (n_d <= 64) {
      throw ArgumentError("sampler: N_d must exceed 64 for inverse problems");
    }
  }
};

struct Sample {
  Point point;
  double weight = 0.0;
  int face = -1;
  double observed = 0.0;
};

struct TrainingSet {
  std::vector<Sample> interior, spatial_boundary, temporal_boundary, data;

  std::size_t size() const {
    return interior.size() + spatial_boundary.size() + temporal_boundary.size() + data.size();
  }
};

/// Uniform points in (0,1)^dim from Sobol or a seeded Mersenne twister.
class UnitCubeSampler {
 public:
  UnitCubeSampler(SamplingStrategy strategy, int dim, std::uint64_t seed)
      : strategy_(strategy), dim_(dim), sobol_(dim), rng_(seed) {}

  std::array<double, SobolSequence::kMaxDim> next() {
    if (strategy_ == SamplingStrategy::Sobol) return sobol_.next();
    std::array<double, SobolSequence::kMaxDim> p{};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int d = 0; d < dim_; ++d) {
      do p[d] = u(rng_);
      while (p[d] == 0.0);
    }
    return p;
  }

 private:
  SamplingStrategy strategy_;
  int dim_;
  SobolSequence sobol_;
  std::mt19937_64 rng_;
};

namespace detail {
inline std::uint64_t family_seed(std::uint64_t seed, std::uint64_t family) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (family + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

inline TrainingSet build_training_set(const SamplerConfig& config, const ProblemSpec& problem) {
  config.validate(problem);
  const DomainSpec& dom = problem.domain;
  const int d = dom.spatial_dim;
  TrainingSet set;

  // Interior points, then (inverse mode) data points continuing the same stream.
  UnitCubeSampler inner(config.strategy, d + 1, detail::family_seed(config.seed, 0));
  auto interior_point = [&] {
    const auto s = inner.next();
    Point p;
    p.t = dom.T * s[0];
    p.x = s[1];
    if (d == 2) p.y = s[2];
    return p;
  };
  const double w_int = dom.spacetime_measure() / config.n_int;
  for (int i = 0; i < config.n_int; ++i) set.interior.push_back({interior_point(), w_int, -1, 0.0});

  if (problem.mode == Mode::Inverse) {
    const double w_d = dom.spacetime_measure() / config.n_d;
    for (int i = 0; i < config.n_d; ++i) {
      const Point p = interior_point();
      set.data.push_back({p, w_d, -1, exact_solution(problem, p)});
    }
    return set;
  }

  // Lateral boundary: even split across faces, remainder to the first faces.
  const int faces = dom.num_faces();
  for (int f = 0; f < faces; ++f) {
    const int n = config.n_sb / faces + (f < config.n_sb % faces ? 1 : 0);
    UnitCubeSampler face(config.strategy, d, detail::family_seed(config.seed, 1 + f));
    const double w = dom.T * 1.0 / n;
    for (int i = 0; i < n; ++i) {
      const auto s = face.next();
      Point p;
      p.t = dom.T * s[0];
      p[face_axis(f)] = face_coordinate(f);
      if (d == 2) p[face_axis(f) == 1 ? 2 : 1] = s[1];
      set.spatial_boundary.push_back({p, w, f, 0.0});
    }
  }

  UnitCubeSampler initial(config.strategy, d, detail::family_seed(config.seed, 16));
  const double w_tb = dom.spatial_measure() / config.n_tb;
  for (int i = 0; i < config.n_tb; ++i) {
    const auto s = initial.next();
    Point p;
    p.x = s[0];
    if (d == 2) p.y = s[1];
    set.temporal_boundary.push_back({p, w_tb, -1, 0.0});
  }
  return set;
}

/// FNV-1a over every coordinate, weight, face tag and observation.
inline std::uint64_t training_set_hash(const TrainingSet& set) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto* family : {&set.interior, &set.spatial_boundary, &set.temporal_boundary, &set.data}) {
    const std::uint64_t n = family->size();
    mix(&n, sizeof n);
    for (const Sample& s : *family) {
      const double v[] = {s.point.t, s.point.x, s.point.y, s.weight, s.observed};
      mix(v, sizeof v);
      const std::int32_t face = s.face;
      mix(&face, sizeof face);
    }
  }
  return h;
}

inline void write_training_set_csv(const TrainingSet& set, std::ostream& os) {
  os << "family,t,x,y,weight,face,observed\n";
  os.precision(17);
  auto rows = [&os](const char* name, const std::vector<Sample>& family) {
    for (const Sample& s : family)
      os << name << ',' << s.point.t << ',' << s.point.x << ',' << s.point.y << ',' << s.weight << ',' << s.face
         << ',' << s.observed << '\n';
  };
  rows("interior", set.interior);
  rows("spatial_boundary", set.spatial_boundary);
  rows("temporal_boundary", set.temporal_boundary);
  rows("data", set.data);
}

/// 1D composite trapezoid nodes and weights on [0, length].
inline void trapezoid_rule(int resolution, double length, std::vector<double>& nodes, std::vector<double>& weights) {
  if (resolution < 2) throw ArgumentError("trapezoid: resolution must be at least 2");
  const double h = length / (resolution - 1);
  nodes.resize(resolution);
  weights.assign(resolution, h);
  for (int i = 0; i < resolution; ++i) nodes[i] = i * h;
  weights.front() = weights.back() = 0.5 * h;
}

/// Tensor-product trapezoid grid on [0,T] x [0,1]^d, time index slowest.
struct TestGrid {
  int resolution = 0;
  int time_resolution = 0;
  int spatial_dim = 1;
  std::vector<double> t_nodes, t_weights, s_nodes, s_weights;

  std::size_t spatial_size() const { return spatial_dim == 1 ? s_nodes.size() : s_nodes.size() * s_nodes.size(); }
  std::size_t size() const { return t_nodes.size() * spatial_size(); }

  /// Spatial node k (x fastest) at time t.
  Point spatial_point(std::size_t k, double t) const {
    const std::size_t n = s_nodes.size();
    Point p;
    p.t = t;
    p.x = s_nodes[k % n];
    if (spatial_dim == 2) p.y = s_nodes[k / n];
    return p;
  }
  double spatial_weight(std::size_t k) const {
    const std::size_t n = s_nodes.size();
    return spatial_dim == 1 ? s_weights[k] : s_weights[k % n] * s_weights[k / n];
  }
  Point point(std::size_t i) const { return spatial_point(i % spatial_size(), t_nodes[i / spatial_size()]); }
  double weight(std::size_t i) const { return t_weights[i / spatial_size()] * spatial_weight(i % spatial_size()); }
};

inline TestGrid test_grid(const DomainSpec& domain, int resolution, int time_resolution = 0) {
  domain.validate();
  TestGrid g;
  g.resolution = resolution;
  g.time_resolution = time_resolution > 0 ? time_resolution : resolution;
  g.spatial_dim = domain.spatial_dim;
  trapezoid_rule(g.time_resolution, domain.T, g.t_nodes, g.t_weights);
  trapezoid_rule(resolution, 1.0, g.s_nodes, g.s_weights);
  return g;
}

/// Spatial-only trapezoid grid on [0,1]^d.
inline TestGrid spatial_grid(int spatial_dim, int resolution) {
  TestGrid g;
  g.resolution = resolution;
  g.time_resolution = 1;
  g.spatial_dim = spatial_dim;
  g.t_nodes = {0.0};
  g.t_weights = {1.0};
  trapezoid_rule(resolution, 1.0, g.s_nodes, g.s_weights);
  return g;
}

}  // namespace rwpinn
