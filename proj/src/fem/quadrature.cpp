// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "lipshape/error.hpp"
#include "lipshape/fem.hpp"

namespace lipshape {
namespace {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);  // 2/((1-z^2)p'^2) scaled to [0,1]
  }
}

QuadratureRule collapsed_rule(int degree) {
  const int n = (degree + 3) / 2;
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xi = x[i];
      const double eta = (1.0 - x[i]) * x[j];
      rule.barycentric.push_back({1.0 - xi - eta, xi, eta});
      rule.weights.push_back(2.0 * w[i] * w[j] * (1.0 - x[i]));
    }
  }
  return rule;
}

QuadratureRule radon_rule() {
  const double s = std::sqrt(15.0);
  const double a1 = (6.0 - s) / 21.0;
  const double b1 = (9.0 + 2.0 * s) / 21.0;
  const double w1 = (155.0 - s) / 1200.0;
  const double a2 = (6.0 + s) / 21.0;
  const double b2 = (9.0 - 2.0 * s) / 21.0;
  const double w2 = (155.0 + s) / 1200.0;
  QuadratureRule rule;
  rule.degree = 5;
  rule.barycentric = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                      {b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                      {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}};
  rule.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
  return rule;
}

QuadratureRule build(int degree) {
  QuadratureRule rule;
  if (degree == 1) {
    rule.degree = 1;
    rule.barycentric = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {1.0};
  } else if (degree == 2) {
    rule.degree = 2;
    const double a = 1.0 / 6.0;
    const double b = 2.0 / 3.0;
    rule.barycentric = {{b, a, a}, {a, b, a}, {a, a, b}};
    rule.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  } else if (degree == 5) {
    rule = radon_rule();
  } else {
    rule = collapsed_rule(degree);
  }

  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      double sum = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        sum += rule.weights[q] * std::pow(rule.barycentric[q][1], a) *
               std::pow(rule.barycentric[q][2], b);
      }
      const double exact = 2.0 * reference_monomial_integral(a, b);
      if (std::abs(sum - exact) > 1e-14) {
        fail(ErrorKind::Contract, "quadrature rule of degree " + std::to_string(degree) +
                                      " fails on monomial (" + std::to_string(a) + ", " +
                                      std::to_string(b) + ")");
      }
    }
  }
  return rule;
}

}  // namespace

double reference_monomial_integral(int a, int b) {
  // a! b! / (a + b + 2)!
  double value = 1.0;
  for (int k = 1; k <= a; ++k) value *= k;
  for (int k = 1; k <= b; ++k) value *= k;
  for (int k = 1; k <= a + b + 2; ++k) value /= k;
  return value;
}

const QuadratureRule& quadrature_rule(int degree) {
  require(degree >= 1 && degree <= 10, ErrorKind::Parameter,
          "quadrature degree must lie in [1, 10], got " + std::to_string(degree));
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, build(degree)).first;
  return it->second;
}

}  // namespace lipshape
