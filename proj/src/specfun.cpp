#include "blowuplab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "blowuplab/quadrature.hpp"

namespace blowuplab::specfun {

namespace {

constexpr double kRelTol = 1e-14;
// Integrand cut where it falls e^-45 (~3e-20) below its peak.
constexpr double kTailDecades = 45.0;
const double kLogMinNormal = std::log(std::numeric_limits<double>::min());

void check_k_domain(double xi, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("bessel_k: argument must be > 0");
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("bessel_k: order must be >= 0");
}

// log cosh(x) for x >= 0 without overflow.
double log_cosh(double x) {
  return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

// log of the shifted integrand exp(-t (cosh z - 1)) cosh(xi z).
double log_integrand(double xi, double t, double z) {
  // cosh z - 1 = 2 sinh^2(z/2), exact for small z.
  const double s = std::sinh(0.5 * z);
  return -2.0 * t * s * s + log_cosh(xi * z);
}

struct ScaledK {
  double log_value;  // log(e^t K_xi(t))
  double rel_error;
};

ScaledK scaled_k(double xi, double t) {
  // Peak location: t sinh z = xi tanh(xi z); zero when xi^2 <= t.
  double z_peak = 0.0;
  if (xi * xi > t) {
    z_peak = std::asinh(xi / t);
    for (int i = 0; i < 50; ++i) {
      const double g1 = -t * std::sinh(z_peak) + xi * std::tanh(xi * z_peak);
      const double th = std::tanh(xi * z_peak);
      const double g2 = -t * std::cosh(z_peak) + xi * xi * (1.0 - th * th);
      if (g2 >= 0.0) break;
      const double step = g1 / g2;
      const double next = std::max(0.5 * z_peak, z_peak - step);
      if (std::abs(next - z_peak) <= 1e-15 * (1.0 + z_peak)) {
        z_peak = next;
        break;
      }
      z_peak = next;
    }
  }
  const double g_peak = std::max(log_integrand(xi, t, 0.0), log_integrand(xi, t, z_peak));

  // Bracket the cut-off beyond the peak, then bisect.
  const double target = g_peak - kTailDecades;
  double lo = z_peak;
  double width = 1.0 / std::sqrt(t) + 0.1;
  double hi = z_peak + width;
  while (log_integrand(xi, t, hi) > target) {
    lo = hi;
    width *= 2.0;
    hi = z_peak + width;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_integrand(xi, t, mid) > target ? lo : hi) = mid;
  }
  const double z_max = hi;

  auto f = [&](double z) { return std::exp(log_integrand(xi, t, z) - g_peak); };
  double value = 0.0;
  double err = 0.0;
  if (z_peak > 0.0) {
    const auto left = quad::gauss_kronrod(f, 0.0, z_peak, kRelTol);
    value += left.value;
    err += left.abs_error;
  }
  const auto right = quad::gauss_kronrod(f, z_peak, z_max, kRelTol);
  value += right.value;
  err += right.abs_error;
  const double rel = std::max(err / value, 4.0 * std::numeric_limits<double>::epsilon());
  return {g_peak + std::log(value), rel};
}

}  // namespace

BesselEval bessel_k_eval(double xi, double t) {
  check_k_domain(xi, t);
  const ScaledK s = scaled_k(xi, t);
  BesselEval out;
  out.order = xi;
  out.argument = t;
  out.log_value = s.log_value - t;
  if (out.log_value < kLogMinNormal) {
    out.status = EvalStatus::underflow;
    out.value = 0.0;
    out.abs_error_estimate = s.rel_error;
  } else {
    out.value = std::exp(out.log_value);
    out.abs_error_estimate = s.rel_error * out.value;
  }
  return out;
}

double bessel_k(double xi, double t) {
  const BesselEval e = bessel_k_eval(xi, t);
  if (e.status == EvalStatus::underflow) {
    throw UnderflowError("bessel_k: K_xi(t) underflows; use log_bessel_k");
  }
  return e.value;
}

double log_bessel_k(double xi, double t) {
  check_k_domain(xi, t);
  return scaled_k(xi, t).log_value - t;
}

double bessel_k_scaled(double xi, double t) {
  check_k_domain(xi, t);
  return std::exp(scaled_k(xi, t).log_value);
}

double bessel_k_dt_scaled(double xi, double t) {
  return -bessel_k_scaled(xi + 1.0, t) + xi / t * bessel_k_scaled(xi, t);
}

double bessel_k_dt(double xi, double t) {
  return -bessel_k(xi + 1.0, t) + xi / t * bessel_k(xi, t);
}

double bessel_k_ratio(double xi, double t) {
  check_k_domain(xi, t);
  return std::exp(scaled_k(xi + 1.0, t).log_value - scaled_k(xi, t).log_value);
}

// ---------------------------------------------------------------------------
// I_nu

namespace detail {

double bessel_i_reduced_series(double nu, double r) {
  // k = 0 term: (1/2)^nu / Gamma(nu + 1)
  double term = std::exp(-nu * std::numbers::ln2 - std::lgamma(nu + 1.0));
  double sum = term;
  const double q = 0.25 * r * r;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (term <= 1e-17 * sum) break;
  }
  return sum;
}

double bessel_i_scaled_series(double nu, double r) {
  if (r == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  // Leading term carries e^{-r} so the partial sums never overflow.
  double term = std::exp(nu * std::log(0.5 * r) - std::lgamma(nu + 1.0) - r);
  double sum = term;
  const double q = 0.25 * r * r;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (term <= 1e-17 * sum && k > r) break;
  }
  return sum;
}

double bessel_i_scaled_asymptotic(double nu, double r) {
  const double mu4 = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu4 - odd * odd) / (8.0 * k * r);
    const double mag = std::abs(next);
    if (mag == 0.0) break;
    // Stop at the smallest term once past the order-driven hump.
    if (k > nu + 1 && mag > prev_mag) break;
    term = next;
    sum += term;
    prev_mag = mag;
    if (mag <= 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * r);
}

}  // namespace detail

namespace {
void check_i_domain(double nu, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("bessel_i: argument must be >= 0");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("bessel_i: order must be >= 0");
}
}  // namespace

double bessel_i_scaled(double nu, double r) {
  check_i_domain(nu, r);
  return r <= detail::kBesselISeriesLimit ? detail::bessel_i_scaled_series(nu, r)
                                          : detail::bessel_i_scaled_asymptotic(nu, r);
}

double bessel_i(double nu, double r) { return bessel_i_scaled(nu, r) * std::exp(r); }

double log_bessel_i(double nu, double r) { return std::log(bessel_i_scaled(nu, r)) + r; }

}  // namespace blowuplab::specfun
