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

// Truncated multivariate Taylor arithmetic in the PDE inputs (t, x[, y]).
//
// A Taylor<S> stores the normalized coefficients c_m = (d^m f / m!) of a
// function around a point for every multi-index m in a TaylorBasis. The
// coefficient type S is either double or a tape-tracked Var, so the same code
// yields input derivatives and, through the tape, their parameter gradients.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rwpinn/errors.hpp"

namespace rwpinn {

inline constexpr int kMaxVars = 3;

/// Variable slots. Spatial problems in 1D use (t, x); 2D adds y.
enum Variable : int { kT = 0, kX = 1, kY = 2 };

using MultiIndex = std::array<int, kMaxVars>;

inline int total_degree(const MultiIndex& m) { return m[0] + m[1] + m[2]; }

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Product of factorials of the entries: converts a normalized Taylor
/// coefficient into the corresponding partial derivative.
inline double factorial_product(const MultiIndex& m) {
  return factorial(m[0]) * factorial(m[1]) * factorial(m[2]);
}

inline std::string to_string(const MultiIndex& m) {
  return "(" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "," + std::to_string(m[2]) + ")";
}

/// The set of multi-indices carried by a Taylor value, together with the
/// truncated multiplication table. Always downward closed and always contains
/// the zero multi-index at position 0.
class TaylorBasis {
 public:
  struct Product {
    std::size_t lhs, rhs, out;
  };

  /// Full tensor box: every multi-index with m[v] <= caps[v].
  static std::shared_ptr<const TaylorBasis> box(std::vector<int> caps) {
    validate_caps(caps);
    std::vector<MultiIndex> all;
    MultiIndex m{0, 0, 0};
    const int n = static_cast<int>(caps.size());
    for (m[0] = 0; m[0] <= caps[0]; ++m[0])
      for (m[1] = 0; m[1] <= (n > 1 ? caps[1] : 0); ++m[1])
        for (m[2] = 0; m[2] <= (n > 2 ? caps[2] : 0); ++m[2]) all.push_back(m);
    return std::shared_ptr<const TaylorBasis>(new TaylorBasis(std::move(caps), std::move(all)));
  }

  /// Downward closure of `reads` inside the caps. Keeps only the
  /// coefficients needed to produce the requested derivatives.
  static std::shared_ptr<const TaylorBasis> closure(std::vector<int> caps,
                                                    const std::vector<MultiIndex>& reads) {
    validate_caps(caps);
    std::vector<MultiIndex> all;
    for (const auto& r : reads) {
      for (int v = 0; v < kMaxVars; ++v) {
        const int cap = v < static_cast<int>(caps.size()) ? caps[v] : 0;
        if (r[v] < 0 || r[v] > cap)
          throw ArgumentError("multi-index " + to_string(r) + " exceeds the degree caps");
      }
      MultiIndex m{0, 0, 0};
      for (m[0] = 0; m[0] <= r[0]; ++m[0])
        for (m[1] = 0; m[1] <= r[1]; ++m[1])
          for (m[2] = 0; m[2] <= r[2]; ++m[2]) all.push_back(m);
    }
    all.push_back({0, 0, 0});
    return std::shared_ptr<const TaylorBasis>(new TaylorBasis(std::move(caps), std::move(all)));
  }

  int num_vars() const { return static_cast<int>(caps_.size()); }
  const std::vector<int>& caps() const { return caps_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& index(std::size_t k) const { return indices_[k]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  int max_degree() const { return max_degree_; }
  int degree(std::size_t k) const { return total_degree(indices_[k]); }

  /// Position of `m`, or size() when absent.
  std::size_t find(const MultiIndex& m) const {
    auto it = lookup_.find(m);
    return it == lookup_.end() ? size() : it->second;
  }
  bool contains(const MultiIndex& m) const { return find(m) != size(); }

  /// Position of `m`; throws when `m` is outside the caps or not carried.
  std::size_t require(const MultiIndex& m) const {
    const std::size_t k = find(m);
    if (k == size()) throw ArgumentError("multi-index " + to_string(m) + " is outside the Taylor basis");
    return k;
  }

  /// All (lhs, rhs, out) with index(lhs) + index(rhs) == index(out).
  const std::vector<Product>& products() const { return products_; }
  /// The subset of products() with both factors non-constant.
  const std::vector<Product>& nonconstant_products() const { return nonconstant_products_; }

  /// Position of the first-order index of variable `var`, or size().
  std::size_t linear_index(int var) const {
    MultiIndex m{0, 0, 0};
    m[var] = 1;
    return find(m);
  }

  bool same_as(const TaylorBasis& other) const {
    return this == &other || (caps_ == other.caps_ && indices_ == other.indices_);
  }

 private:
  TaylorBasis(std::vector<int> caps, std::vector<MultiIndex> all) : caps_(std::move(caps)) {
    std::sort(all.begin(), all.end(), [](const MultiIndex& a, const MultiIndex& b) {
      const int da = total_degree(a), db = total_degree(b);
      return da != db ? da < db : a < b;
    });
    all.erase(std::unique(all.begin(), all.end()), all.end());
    indices_ = std::move(all);
    max_degree_ = 0;
    for (std::size_t k = 0; k < indices_.size(); ++k) {
      lookup_.emplace(indices_[k], k);
      max_degree_ = std::max(max_degree_, total_degree(indices_[k]));
    }
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      for (std::size_t j = 0; j < indices_.size(); ++j) {
        MultiIndex s{};
        for (int v = 0; v < kMaxVars; ++v) s[v] = indices_[i][v] + indices_[j][v];
        const std::size_t k = find(s);
        if (k == size()) continue;
        products_.push_back({i, j, k});
        if (i != 0 && j != 0) nonconstant_products_.push_back({i, j, k});
      }
    }
  }

  static void validate_caps(const std::vector<int>& caps) {
    if (caps.empty() || caps.size() > static_cast<std::size_t>(kMaxVars))
      throw ArgumentError("Taylor basis needs between 1 and 3 variables");
    for (int c : caps)
      if (c < 0 || c > 8) throw ArgumentError("degree caps must lie in [0, 8]");
  }

  std::vector<int> caps_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t> lookup_;
  std::vector<Product> products_;
  std::vector<Product> nonconstant_products_;
  int max_degree_ = 0;
};

using BasisPtr = std::shared_ptr<const TaylorBasis>;

/// Plain value of a coefficient scalar.
inline double value_of(double v) { return v; }

template <class S>
class Taylor {
 public:
  Taylor() = default;

  /// Constant function with value `v`.
  Taylor(BasisPtr basis, S v) : basis_(std::move(basis)), c_(basis_->size(), S(0.0)) { c_[0] = v; }

  const BasisPtr& basis() const { return basis_; }
  std::size_t size() const { return c_.size(); }

  const S& value() const { return c_[0]; }
  const S& operator[](std::size_t k) const { return c_[k]; }
  S& operator[](std::size_t k) { return c_[k]; }
  const std::vector<S>& coefficients() const { return c_; }

  /// Coefficient at multi-index `m` (zero when not carried).
  S coefficient(const MultiIndex& m) const {
    const std::size_t k = basis_->find(m);
    return k == basis_->size() ? S(0.0) : c_[k];
  }

  Taylor& operator+=(const Taylor& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = c_[k] - o.c_[k];
    return *this;
  }
  Taylor& operator*=(const S& s) {
    for (auto& c : c_) c = c * s;
    return *this;
  }
  Taylor& operator+=(const S& s) {
    c_[0] = c_[0] + s;
    return *this;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator-(const Taylor& a) {
    Taylor r = a;
    for (auto& c : r.c_) c = -c;
    return r;
  }
  friend Taylor operator*(Taylor a, const S& s) { return a *= s; }
  friend Taylor operator*(const S& s, Taylor a) { return a *= s; }
  friend Taylor operator+(Taylor a, const S& s) { return a += s; }
  friend Taylor operator+(const S& s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a, const S& s) { return a += S(-s); }
  friend Taylor operator-(const S& s, const Taylor& a) { return (-a) + s; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    a.check(b);
    Taylor r(a.basis_, S(0.0));
    for (const auto& p : a.basis_->products()) r.c_[p.out] = r.c_[p.out] + a.c_[p.lhs] * b.c_[p.rhs];
    return r;
  }

 private:
  void check(const Taylor& o) const {
    if (!basis_ || !o.basis_ || !basis_->same_as(*o.basis_))
      throw ArgumentError("Taylor arithmetic requires identical degree caps");
  }

  BasisPtr basis_;
  std::vector<S> c_;
};

/// Identity function in variable `var` expanded at `value`.
template <class S = double>
Taylor<S> taylor_lift(const BasisPtr& basis, S value, int var) {
  if (!basis || var < 0 || var >= basis->num_vars())
    throw ArgumentError("taylor_lift: variable index " + std::to_string(var) + " is not active");
  const std::size_t k = basis->linear_index(var);
  if (k == basis->size()) throw ArgumentError("taylor_lift: variable has degree cap 0");
  Taylor<S> r(basis, value);
  r[k] = S(1.0);
  return r;
}

/// d^m a / dz^m at the expansion point: coefficient times the factorials.
template <class S>
S extract_derivative(const Taylor<S>& a, const MultiIndex& m) {
  const std::size_t k = a.basis()->require(m);
  return a[k] * factorial_product(m);
}

/// f(a) for a univariate f given its derivatives f^(j)(a0), j = 0..max_degree.
template <class S>
Taylor<S> compose(const Taylor<S>& a, std::span<const S> derivs) {
  const int degree = a.basis()->max_degree();
  if (static_cast<int>(derivs.size()) <= degree)
    throw ArgumentError("compose: need derivatives up to the basis degree");
  Taylor<S> h = a;
  h[0] = S(0.0);
  Taylor<S> result(a.basis(), derivs[0]);
  Taylor<S> power = h;
  double fact = 1.0;
  for (int j = 1; j <= degree; ++j) {
    fact *= j;
    result += power * S(derivs[j] * (1.0 / fact));
    if (j < degree) power = power * h;
  }
  return result;
}

namespace detail {

/// Coefficients (ascending powers of T) of the polynomial P_n with
/// d^n/dx^n tanh(x) = P_n(tanh x).
inline const std::vector<std::vector<double>>& tanh_derivative_polynomials() {
  static const std::vector<std::vector<double>> polys = [] {
    constexpr int kOrders = 12;
    std::vector<std::vector<double>> p(kOrders);
    p[0] = {0.0, 1.0};
    for (int n = 1; n < kOrders; ++n) {
      const auto& prev = p[n - 1];
      std::vector<double> deriv(prev.size() > 1 ? prev.size() - 1 : 1, 0.0);
      for (std::size_t i = 1; i < prev.size(); ++i) deriv[i - 1] = static_cast<double>(i) * prev[i];
      // multiply by (1 - T^2)
      std::vector<double> next(deriv.size() + 2, 0.0);
      for (std::size_t i = 0; i < deriv.size(); ++i) {
        next[i] += deriv[i];
        next[i + 2] -= deriv[i];
      }
      p[n] = std::move(next);
    }
    return p;
  }();
  return polys;
}

template <class S>
S horner(const std::vector<double>& coeffs, const S& x) {
  S r(coeffs.back());
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) r = r * x + S(coeffs[i]);
  return r;
}

}  // namespace detail

/// tanh and its first n derivatives at x.
template <class S>
std::vector<S> tanh_derivatives(const S& x, int n) {
  using std::tanh;
  const auto& polys = detail::tanh_derivative_polynomials();
  if (n >= static_cast<int>(polys.size())) throw ArgumentError("tanh_derivatives: order too high");
  const S t = tanh(x);
  std::vector<S> d;
  d.reserve(n + 1);
  d.push_back(t);
  for (int j = 1; j <= n; ++j) d.push_back(detail::horner(polys[j], t));
  return d;
}

template <class S>
Taylor<S> tanh(const Taylor<S>& a) {
  const auto d = tanh_derivatives(a.value(), a.basis()->max_degree());
  return compose(a, std::span<const S>(d));
}

template <class S>
Taylor<S> exp(const Taylor<S>& a) {
  using std::exp;
  const S e = exp(a.value());
  const std::vector<S> d(a.basis()->max_degree() + 1, e);
  return compose(a, std::span<const S>(d));
}

template <class S>
Taylor<S> log(const Taylor<S>& a) {
  using std::log;
  const int n = a.basis()->max_degree();
  std::vector<S> d{log(a.value())};
  const S inv = S(1.0) / a.value();
  S p = inv;
  for (int j = 1; j <= n; ++j) {
    // d^j log = (-1)^(j-1) (j-1)! x^-j
    d.push_back(p * S(((j - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(j - 1)));
    p = p * inv;
  }
  return compose(a, std::span<const S>(d));
}

template <class S>
Taylor<S> sin(const Taylor<S>& a) {
  using std::cos;
  using std::sin;
  const S s = sin(a.value()), c = cos(a.value());
  std::vector<S> d;
  for (int j = 0; j <= a.basis()->max_degree(); ++j) {
    switch (j % 4) {
      case 0: d.push_back(s); break;
      case 1: d.push_back(c); break;
      case 2: d.push_back(-s); break;
      default: d.push_back(-c); break;
    }
  }
  return compose(a, std::span<const S>(d));
}

template <class S>
Taylor<S> cos(const Taylor<S>& a) {
  using std::cos;
  using std::sin;
  const S s = sin(a.value()), c = cos(a.value());
  std::vector<S> d;
  for (int j = 0; j <= a.basis()->max_degree(); ++j) {
    switch (j % 4) {
      case 0: d.push_back(c); break;
      case 1: d.push_back(-s); break;
      case 2: d.push_back(-c); break;
      default: d.push_back(s); break;
    }
  }
  return compose(a, std::span<const S>(d));
}

/// Integer power by repeated multiplication (exact for any sign of a).
template <class S>
Taylor<S> pow(const Taylor<S>& a, int n) {
  if (n < 0) throw ArgumentError("pow: negative integer exponent, use a real exponent");
  Taylor<S> r(a.basis(), S(1.0));
  Taylor<S> base = a;
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return r;
}

/// Real power a^p for a positive value.
template <class S>
Taylor<S> pow(const Taylor<S>& a, double p) {
  using std::pow;
  const int n = a.basis()->max_degree();
  std::vector<S> d;
  double falling = 1.0;
  for (int j = 0; j <= n; ++j) {
    d.push_back(S(falling) * pow(a.value(), p - j));
    falling *= (p - j);
  }
  return compose(a, std::span<const S>(d));
}

template <class S>
Taylor<S> reciprocal(const Taylor<S>& a) {
  return pow(a, -1.0);
}

}  // namespace rwpinn
