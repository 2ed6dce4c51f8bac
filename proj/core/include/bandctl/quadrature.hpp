// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <span>
#include <string>

#include "bandctl/errors.hpp"

namespace bandctl {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

/// Rules are cached for n in {16, 32, ..., 1024}.
GaussRule gauss_legendre(int n);

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int min_nodes = 16;
  int max_nodes = 1024;
};

/// Magnitude used by the convergence test; overload for vector-like values.
inline double magnitude(double v) noexcept { return std::abs(v); }

namespace detail {
template <class F>
auto gauss_sum(F& f, double lo, double hi, int n) {
  const GaussRule rule = gauss_legendre(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  auto acc = f(mid + half * rule.nodes[0]) * rule.weights[0];
  for (int i = 1; i < n; ++i) acc = acc + f(mid + half * rule.nodes[i]) * rule.weights[i];
  return acc * half;
}
}  // namespace detail

/// Integrates f over [lo, hi], doubling the Gauss-Legendre order until two
/// successive estimates agree. The value type only needs +, scalar * and an
/// overload of magnitude(). An empty or reversed interval integrates to zero.
template <class F>
auto integrate(F&& f, double lo, double hi, const QuadratureOptions& opt = {}) {
  using Value = decltype(f(lo) * 1.0);
  if (!(hi > lo)) return Value(f(lo) * 0.0);
  int n = opt.min_nodes;
  Value prev = detail::gauss_sum(f, lo, hi, n);
  while (n < opt.max_nodes) {
    n *= 2;
    Value next = detail::gauss_sum(f, lo, hi, n);
    const double diff = magnitude(next + prev * -1.0);
    if (diff <= opt.rel_tol * magnitude(next) + opt.abs_tol) return next;
    prev = next;
  }
  throw Error(ErrorCode::QuadratureNotConverged,
              "no convergence on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace bandctl
