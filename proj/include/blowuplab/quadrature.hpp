#pragma once

#include <functional>
#include <span>

namespace blowuplab::quad {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|).
QuadResult gauss_kronrod(const Integrand& f, double a, double b, double rel_tol,
                         double abs_tol = 0.0, int max_intervals = 4000);

/// Composite Simpson on a uniform grid, halving the spacing until two
/// successive estimates differ by less than rel_tol (relative).
QuadResult simpson_adaptive(const Integrand& f, double a, double b, double rel_tol,
                            int initial_panels = 64, int max_halvings = 16);

/// Trapezoid rule over tabulated samples. x must be ascending.
double trapezoid(std::span<const double> x, std::span<const double> y);

/// Running trapezoid integral, out[0] = 0.
void cumulative_trapezoid(std::span<const double> x, std::span<const double> y,
                          std::span<double> out);

}  // namespace blowuplab::quad
