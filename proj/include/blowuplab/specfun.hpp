#pragma once

// Modified Bessel kernels K_xi and I_nu for real, non-negative order.
//
// K_xi(t) is evaluated from the integral representation
//   K_xi(t) = int_0^inf exp(-t cosh z) cosh(xi z) dz
// with adaptive Gauss-Kronrod quadrature in log-shifted form, so that the
// log-scaled value stays finite far beyond the point where K itself
// underflows. I_nu(r) uses the ascending power series for r <= 20 and the
// Hankel large-argument expansion above.

#include <stdexcept>

namespace blowuplab::specfun {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the plain-valued entry points when K_xi(t) is below the
/// smallest normal double. Use log_bessel_k / bessel_k_scaled instead.
class UnderflowError : public std::underflow_error {
 public:
  using std::underflow_error::underflow_error;
};

enum class EvalStatus { ok, underflow };

struct BesselEval {
  double order = 0.0;
  double argument = 0.0;
  double value = 0.0;               // 0 when status == underflow
  double log_value = 0.0;           // always finite
  double abs_error_estimate = 0.0;  // absolute, on value (relative on log_value when underflowed)
  EvalStatus status = EvalStatus::ok;
};

/// Full evaluation record for K_xi(t). Throws DomainError for t <= 0 or xi < 0.
BesselEval bessel_k_eval(double xi, double t);

/// K_xi(t). Throws UnderflowError when the value is not representable.
double bessel_k(double xi, double t);

/// log K_xi(t), finite for every admissible argument.
double log_bessel_k(double xi, double t);

/// e^t K_xi(t).
double bessel_k_scaled(double xi, double t);

/// dK_xi/dt = -K_{xi+1}(t) + (xi/t) K_xi(t).
double bessel_k_dt(double xi, double t);

/// e^t dK_xi/dt, same recurrence on scaled values.
double bessel_k_dt_scaled(double xi, double t);

/// K_{xi+1}(t) / K_xi(t) from log-scaled values.
double bessel_k_ratio(double xi, double t);

/// I_nu(r). Throws DomainError for r < 0 or nu < 0.
double bessel_i(double nu, double r);

/// e^{-r} I_nu(r).
double bessel_i_scaled(double nu, double r);

/// log I_nu(r); -inf at r = 0 for nu > 0.
double log_bessel_i(double nu, double r);

namespace detail {
/// Branch crossover between the power series and the asymptotic expansion.
inline constexpr double kBesselISeriesLimit = 20.0;

/// e^{-r} I_nu(r) by the ascending series.
double bessel_i_scaled_series(double nu, double r);

/// e^{-r} I_nu(r) by the large-argument expansion (valid for r >~ 15).
double bessel_i_scaled_asymptotic(double nu, double r);

/// sum_k (r/2)^{2k} / (2^nu k! Gamma(k+nu+1)) = r^{-nu} I_nu(r), finite at r = 0.
double bessel_i_reduced_series(double nu, double r);
}  // namespace detail

}  // namespace blowuplab::specfun
