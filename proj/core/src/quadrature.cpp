// SPDX-License-Identifier: MIT
#include "bandctl/quadrature.hpp"

#include <array>
#include <numbers>
#include <vector>

namespace bandctl {
namespace {

struct RuleStore {
  std::vector<double> nodes, weights;
};

// Newton iteration on P_n started from the Chebyshev-like initial guess.
RuleStore build_rule(int n) {
  RuleStore r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

constexpr std::array<int, 7> kOrders{16, 32, 64, 128, 256, 512, 1024};

const std::array<RuleStore, kOrders.size()>& rules() {
  static const auto store = [] {
    std::array<RuleStore, kOrders.size()> s;
    for (std::size_t i = 0; i < kOrders.size(); ++i) s[i] = build_rule(kOrders[i]);
    return s;
  }();
  return store;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  for (std::size_t i = 0; i < kOrders.size(); ++i) {
    if (kOrders[i] == n) {
      const auto& r = rules()[i];
      return {r.nodes, r.weights};
    }
  }
  throw Error(ErrorCode::InvalidParameter, "unsupported Gauss-Legendre order " + std::to_string(n));
}

}  // namespace bandctl
