// SPDX-License-Identifier: Apache-2.0
#include "roomrom/gll.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "roomrom/errors.hpp"

namespace roomrom {
namespace {

// Legendre P_n and derivative at x via the three-term recurrence.
void legendre(int n, double x, double& pn, double& dpn) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    pn = 1.0;
    dpn = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  // (1-x^2) P_n' = n (P_{n-1} - x P_n)
  if (std::abs(1.0 - x * x) < 1e-14) {
    dpn = 0.0;  // endpoints handled separately by callers
  } else {
    dpn = n * (p0 - x * p1) / (1.0 - x * x);
  }
}

GllRule build_rule(int order) {
  if (order < 1) throw ConfigError("polynomial order must be >= 1");
  const int n = order;
  const int np = n + 1;
  Eigen::VectorXd x(np);
  x(0) = -1.0;
  x(n) = 1.0;
  // Interior nodes: roots of P_n'. Newton from Chebyshev-Lobatto guesses.
  for (int i = 1; i < n; ++i) {
    double xi = -std::cos(M_PI * i / n);
    for (int it = 0; it < 100; ++it) {
      double pn, dpn;
      legendre(n, xi, pn, dpn);
      // f = P_n'(xi); f' from the Legendre ODE: (1-x^2)P'' = 2xP' - n(n+1)P
      const double d2 = (2.0 * xi * dpn - n * (n + 1.0) * pn) / (1.0 - xi * xi);
      const double step = dpn / d2;
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x(i) = xi;
  }
  // enforce exact symmetry about the origin
  for (int i = 0; i <= n / 2; ++i) {
    const double v = 0.5 * (x(i) - x(n - i));
    x(i) = v;
    x(n - i) = -v;
  }
  Eigen::VectorXd w(np), pn_at(np);
  for (int i = 0; i < np; ++i) {
    double pn, dpn;
    legendre(n, x(i), pn, dpn);
    pn_at(i) = pn;
    w(i) = 2.0 / (n * (n + 1.0) * pn * pn);
  }
  for (int i = 0; i <= n / 2; ++i) {
    const double v = 0.5 * (w(i) + w(n - i));
    w(i) = v;
    w(n - i) = v;
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(np, np);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      if (i != j) D(i, j) = (pn_at(i) / pn_at(j)) / (x(i) - x(j));
  D(0, 0) = -n * (n + 1.0) / 4.0;
  D(n, n) = n * (n + 1.0) / 4.0;

  GllRule rule;
  rule.nodes = x;
  rule.weights = w;
  rule.diff = D;
  Eigen::MatrixXd K1 = D.transpose() * w.asDiagonal() * D;
  rule.stiff1d = 0.5 * (K1 + K1.transpose());  // exactly symmetric reference block
  return rule;
}

}  // namespace

const GllRule& gll_rule(int order) {
  static std::mutex mtx;
  static std::map<int, GllRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

Eigen::VectorXd lagrange_values(const Eigen::VectorXd& nodes, double xi) {
  const int np = static_cast<int>(nodes.size());
  Eigen::VectorXd vals(np);
  for (int j = 0; j < np; ++j) {
    double v = 1.0;
    for (int m = 0; m < np; ++m) {
      if (m == j) continue;
      v *= (xi - nodes(m)) / (nodes(j) - nodes(m));
    }
    vals(j) = v;
  }
  return vals;
}

}  // namespace roomrom
