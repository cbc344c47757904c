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

// Adam and limited-memory BFGS with a strong-Wolfe line search.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rwpinn/errors.hpp"

namespace rwpinn {

/// f(x); writes the gradient into `grad` (same size as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct AdamConfig {
  int steps = 500;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const {
    if (steps < 0) throw ArgumentError("adam: steps must be nonnegative");
    if (!(learning_rate > 0.0)) throw ArgumentError("adam: learning rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw ArgumentError("adam: betas in [0,1)");
  }
};

struct LbfgsConfig {
  int max_iterations = 5000;
  int memory = 10;
  double c1 = 1e-4;
  double c2 = 0.9;
  double gradient_tolerance = 1e-9;
  int max_line_search = 30;

  void validate() const {
    if (max_iterations < 0 || max_iterations > 5000) throw ArgumentError("lbfgs: max_iterations must be in [0, 5000]");
    if (memory < 1) throw ArgumentError("lbfgs: memory must be positive");
    if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) throw ArgumentError("lbfgs: need 0 < c1 < c2 < 1");
    if (!(gradient_tolerance > 0.0)) throw ArgumentError("lbfgs: gradient tolerance must be positive");
    if (max_line_search < 1) throw ArgumentError("lbfgs: max_line_search must be positive");
  }
};

enum class LbfgsStatus { GradientTolerance, MaxIterations, LineSearchFailure };

inline std::string to_string(LbfgsStatus s) {
  switch (s) {
    case LbfgsStatus::GradientTolerance: return "gradient_tolerance";
    case LbfgsStatus::MaxIterations: return "max_iterations";
    case LbfgsStatus::LineSearchFailure: return "line_search_failure";
  }
  return "?";
}

struct OptimResult {
  std::vector<double> x;
  double f = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::MaxIterations;
  std::vector<double> history;  // objective at x0 and after every accepted step
};

namespace detail {
inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }
}  // namespace detail

/// Plain Adam. A non-finite objective propagates as NumericError.
inline OptimResult adam_minimize(const Objective& f, std::vector<double> x, const AdamConfig& cfg) {
  cfg.validate();
  const std::size_t n = x.size();
  std::vector<double> g(n), m(n, 0.0), v(n, 0.0);
  OptimResult r;
  double b1t = 1.0, b2t = 1.0;
  for (int step = 0; step < cfg.steps; ++step) {
    const double fx = f(x, g);
    if (!std::isfinite(fx)) throw NumericError("adam objective", fx);
    r.history.push_back(fx);
    ++r.evaluations;
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double mh = m[i] / (1.0 - b1t), vh = v[i] / (1.0 - b2t);
      x[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.epsilon);
    }
    ++r.iterations;
  }
  r.f = f(x, g);
  ++r.evaluations;
  if (!std::isfinite(r.f)) throw NumericError("adam objective", r.f);
  r.history.push_back(r.f);
  r.gradient_norm = detail::norm(g);
  r.x = std::move(x);
  return r;
}

namespace detail {

struct LinePoint {
  double alpha = 0.0, f = 0.0, dphi = 0.0;
  std::vector<double> x, g;
};

/// Minimiser of the cubic interpolating (a, fa, da) and (b, fb, db),
/// safeguarded to the middle 80% of the interval; bisection if degenerate.
inline double cubic_step(const LinePoint& a, const LinePoint& b) {
  const double lo = std::min(a.alpha, b.alpha), hi = std::max(a.alpha, b.alpha);
  const double mid = 0.5 * (lo + hi);
  if (!std::isfinite(a.f) || !std::isfinite(b.f) || !std::isfinite(a.dphi) || !std::isfinite(b.dphi)) return mid;
  const double d1 = a.dphi + b.dphi - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.dphi * b.dphi;
  if (disc < 0.0) return mid;
  const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
  const double denom = b.dphi - a.dphi + 2.0 * d2;
  if (denom == 0.0) return mid;
  double t = b.alpha - (b.alpha - a.alpha) * (b.dphi + d2 - d1) / denom;
  if (!std::isfinite(t)) return mid;
  const double margin = 0.1 * (hi - lo);
  return std::clamp(t, lo + margin, hi - margin);
}

}  // namespace detail

/// Curvature pairs carried between calls, so a run can continue after the
/// objective is adjusted without discarding its Hessian approximation.
struct LbfgsMemory {
  std::deque<std::vector<double>> S, Y;
  std::deque<double> rho;

  std::size_t size() const { return S.size(); }
  void clear() {
    S.clear();
    Y.clear();
    rho.clear();
  }
};

/// L-BFGS with two-loop recursion and a strong-Wolfe line search (bracketing
/// then cubic zoom). Accepted objective values are nonincreasing. On a failed
/// line search the memory is cleared once and the step retried along -g; a
/// second failure stops with LineSearchFailure and the best point so far.
inline OptimResult lbfgs_minimize(const Objective& f, std::vector<double> x0, const LbfgsConfig& cfg,
                                  const std::function<void(int, double)>& on_iteration = {},
                                  LbfgsMemory* carried = nullptr) {
  cfg.validate();
  using detail::dot;
  const std::size_t n = x0.size();
  OptimResult r;

  auto eval = [&](detail::LinePoint& p) {
    p.g.assign(n, 0.0);
    try {
      p.f = f(p.x, p.g);
    } catch (const NumericError&) {
      p.f = std::numeric_limits<double>::infinity();
    }
    ++r.evaluations;
    if (!std::isfinite(p.f)) p.f = std::numeric_limits<double>::infinity();
  };

  detail::LinePoint cur;
  cur.x = std::move(x0);
  eval(cur);
  if (!std::isfinite(cur.f)) throw NumericError("lbfgs initial objective", cur.f);
  r.history.push_back(cur.f);

  LbfgsMemory local;
  LbfgsMemory& mem = carried ? *carried : local;
  if (!mem.S.empty() && mem.S.front().size() != n) mem.clear();
  auto& S = mem.S;
  auto& Y = mem.Y;
  auto& rho = mem.rho;
  std::vector<double> d(n), q(n);
  std::vector<double> alpha_hist;
  bool reset_used = false;

  for (;;) {
    const double gnorm = detail::norm(cur.g);
    if (gnorm <= cfg.gradient_tolerance) {
      r.status = LbfgsStatus::GradientTolerance;
      break;
    }
    if (r.iterations >= cfg.max_iterations) {
      r.status = LbfgsStatus::MaxIterations;
      break;
    }

    // Two-loop recursion: d = -H g.
    q = cur.g;
    alpha_hist.assign(S.size(), 0.0);
    for (std::size_t i = S.size(); i-- > 0;) {
      alpha_hist[i] = rho[i] * dot(S[i], q);
      for (std::size_t k = 0; k < n; ++k) q[k] -= alpha_hist[i] * Y[i][k];
    }
    const double gamma = S.empty() ? 1.0 : dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
    for (std::size_t k = 0; k < n; ++k) q[k] *= gamma;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double beta = rho[i] * dot(Y[i], q);
      for (std::size_t k = 0; k < n; ++k) q[k] += (alpha_hist[i] - beta) * S[i][k];
    }
    for (std::size_t k = 0; k < n; ++k) d[k] = -q[k];
    double dphi0 = dot(cur.g, d);
    if (!(dphi0 < 0.0)) {
      S.clear();
      Y.clear();
      rho.clear();
      for (std::size_t k = 0; k < n; ++k) d[k] = -cur.g[k];
      dphi0 = -gnorm * gnorm;
    }

    // Strong-Wolfe search along d.
    const double alpha_init = S.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
    auto at = [&](double alpha) {
      detail::LinePoint p;
      p.alpha = alpha;
      p.x.resize(n);
      for (std::size_t k = 0; k < n; ++k) p.x[k] = cur.x[k] + alpha * d[k];
      eval(p);
      p.dphi = std::isfinite(p.f) ? dot(p.g, d) : std::numeric_limits<double>::quiet_NaN();
      return p;
    };
    auto armijo_fails = [&](const detail::LinePoint& p) { return !(p.f <= cur.f + cfg.c1 * p.alpha * dphi0); };
    auto curvature_ok = [&](const detail::LinePoint& p) { return std::abs(p.dphi) <= -cfg.c2 * dphi0; };

    detail::LinePoint prev{0.0, cur.f, dphi0, cur.x, cur.g};
    detail::LinePoint accepted;
    bool found = false;
    int budget = cfg.max_line_search;
    auto zoom = [&](detail::LinePoint lo, detail::LinePoint hi) {
      while (budget-- > 0) {
        detail::LinePoint p = at(detail::cubic_step(lo, hi));
        if (armijo_fails(p) || p.f >= lo.f) {
          hi = std::move(p);
        } else {
          if (curvature_ok(p)) {
            accepted = std::move(p);
            return true;
          }
          if (p.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
          lo = std::move(p);
        }
        if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha)) break;
      }
      // Best Armijo point if the curvature condition was never met.
      if (lo.alpha > 0.0 && lo.f < cur.f) {
        accepted = std::move(lo);
        return true;
      }
      return false;
    };

    double alpha = alpha_init;
    for (int i = 0; budget-- > 0; ++i) {
      detail::LinePoint p = at(alpha);
      if (armijo_fails(p) || (i > 0 && p.f >= prev.f)) {
        found = zoom(prev, std::move(p));
        break;
      }
      if (curvature_ok(p)) {
        accepted = std::move(p);
        found = true;
        break;
      }
      if (p.dphi >= 0.0) {
        found = zoom(std::move(p), prev);
        break;
      }
      prev = std::move(p);
      alpha *= 2.0;
    }

    if (!found) {
      if (!reset_used && !S.empty()) {
        reset_used = true;
        S.clear();
        Y.clear();
        rho.clear();
        continue;
      }
      r.status = LbfgsStatus::LineSearchFailure;
      break;
    }

    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = accepted.x[k] - cur.x[k];
      y[k] = accepted.g[k] - cur.g[k];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * detail::norm(s) * detail::norm(y)) {
      if (static_cast<int>(S.size()) == cfg.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      rho.push_back(1.0 / sy);
    }
    cur = std::move(accepted);
    ++r.iterations;
    r.history.push_back(cur.f);
    if (on_iteration) on_iteration(r.iterations, cur.f);
  }

  r.f = cur.f;
  r.gradient_norm = detail::norm(cur.g);
  r.x = std::move(cur.x);
  return r;
}

}  // namespace rwpinn
