#pragma once

#include <functional>
#include <span>
#include <vector>

namespace curvflow {

struct Integral {
  double value = 0.0;
  double error = 0.0;  ///< estimated absolute error
};

struct AdaptiveOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_intervals = 4000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature. Intervals are
/// bisected in order of largest error estimate until the total estimate meets
/// max(abs_tol, rel_tol * |value|) or the interval budget is exhausted.
Integral integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                            const AdaptiveOptions& opts = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int points);

/// Fixed-order Gauss-Legendre integral of f over [a, b].
double integrate_gauss(const std::function<double(double)>& f, double a, double b, int points = 20);

/// Finite-difference weights (Fornberg) for derivatives 0..max_order at x0
/// from arbitrary distinct nodes. Result is indexed [order][node].
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> nodes, int max_order);

}  // namespace curvflow
