#include "blowuplab/testfunc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blowuplab/quadrature.hpp"
#include "blowuplab/specfun.hpp"

namespace blowuplab::testfunc {

namespace {

constexpr double kSeriesLimit = specfun::detail::kBesselISeriesLimit;

double half_order(int N) { return 0.5 * N - 1.0; }

double log_two_pi_pow(int N) { return 0.5 * N * std::log(2.0 * std::numbers::pi); }

}  // namespace

double sphere_measure(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double phi(double r, int N) {
  if (N == 1) return 2.0 * std::cosh(r);
  if (r <= kSeriesLimit) {
    return std::exp(log_two_pi_pow(N)) * specfun::detail::bessel_i_reduced_series(half_order(N), r);
  }
  return std::exp(log_phi(r, N));
}

double log_phi(double r, int N) {
  if (N == 1) return r + std::log1p(std::exp(-2.0 * r));
  const double nu = half_order(N);
  if (r <= kSeriesLimit) {
    return log_two_pi_pow(N) + std::log(specfun::detail::bessel_i_reduced_series(nu, r));
  }
  return log_two_pi_pow(N) - nu * std::log(r) + specfun::log_bessel_i(nu, r);
}

double phi_prime(double r, int N) {
  if (N == 1) return 2.0 * std::sinh(r);
  // d/dr [r^{-nu} I_nu(r)] = r^{-nu} I_{nu+1}(r)
  const double nu = half_order(N);
  if (r <= kSeriesLimit) {
    return std::exp(log_two_pi_pow(N)) * r *
           specfun::detail::bessel_i_reduced_series(nu + 1.0, r);
  }
  return std::exp(log_two_pi_pow(N) - nu * std::log(r) + specfun::log_bessel_i(nu + 1.0, r));
}

// ---------------------------------------------------------------------------

TestFunctionKit::TestFunctionKit(const ModelParams& params) : params_(params) {
  delta_ = exponents::delta(params.mu, params.nu);
  if (delta_ < 0.0) {
    throw exponents::DomainError("TestFunctionKit: requires delta >= 0");
  }
  xi_ = 0.5 * std::sqrt(delta_);
  alpha_ = exponents::alpha(params.mu, params.nu);
  k0_one_ = specfun::bessel_k(xi_, 1.0);
  k1_one_ = specfun::bessel_k(xi_ + 1.0, 1.0);
}

double TestFunctionKit::log_rho(double t) const {
  const double s = 1.0 + t;
  return 0.5 * (params_.mu + 1.0) * std::log(s) + specfun::log_bessel_k(xi_, s);
}

double TestFunctionKit::rho(double t) const { return std::exp(log_rho(t)); }

double TestFunctionKit::rho_log_derivative(double t) const {
  const double s = 1.0 + t;
  return (params_.mu + 1.0 + std::sqrt(delta_)) / (2.0 * s) - specfun::bessel_k_ratio(xi_, s);
}

double TestFunctionKit::rho_prime(double t) const { return rho(t) * rho_log_derivative(t); }

RhoJet TestFunctionKit::rho_jet_scaled(double t) const {
  const double s = 1.0 + t;
  const double a = 0.5 * (params_.mu + 1.0);
  const double k0 = specfun::bessel_k_scaled(xi_, s);
  const double k1 = specfun::bessel_k_scaled(xi_ + 1.0, s);
  const double k2 = specfun::bessel_k_scaled(xi_ + 2.0, s);
  // Recurrence K'_v = -K_{v+1} + (v/s) K_v, applied twice.
  const double dk0 = -k1 + xi_ / s * k0;
  const double dk1 = -k2 + (xi_ + 1.0) / s * k1;
  const double d2k0 = -dk1 - xi_ / (s * s) * k0 + xi_ / s * dk0;
  // e^t = e^{s} e^{-1}; the e^{s} is already inside the scaled K values.
  const double pref = std::exp(a * std::log(s) - 1.0);
  RhoJet jet;
  jet.value = pref * k0;
  jet.d1 = pref * (a / s * k0 + dk0);
  jet.d2 = pref * (a * (a - 1.0) / (s * s) * k0 + 2.0 * a / s * dk0 + d2k0);
  return jet;
}

double TestFunctionKit::rho_ode_residual(double t) const {
  const double s = 1.0 + t;
  const RhoJet j = rho_jet_scaled(t);
  const double mu = params_.mu;
  const double nu2 = params_.nu * params_.nu;
  const double terms[] = {j.d2, -j.value, -mu / s * j.d1, mu / (s * s) * j.value,
                          nu2 / (s * s) * j.value};
  double sum = 0.0;
  double biggest = 0.0;
  for (double x : terms) {
    sum += x;
    biggest = std::max(biggest, std::abs(x));
  }
  return std::abs(sum) / biggest;
}

double TestFunctionKit::log_psi(double r, double t) const {
  return log_rho(t) + log_phi(r, params_.N);
}

double TestFunctionKit::psi(double r, double t) const { return std::exp(log_psi(r, t)); }

double TestFunctionKit::psi0(double r, double t) const {
  return std::exp(log_phi(r, params_.N) - t);
}

double TestFunctionKit::m(double t) const { return std::pow(1.0 + t, params_.mu); }

double TestFunctionKit::zeta(double t) const { return std::pow(1.0 + t, alpha_); }

double TestFunctionKit::M_mult(double t) const {
  return std::pow(1.0 + t, 1.0 + std::sqrt(delta_));
}

double TestFunctionKit::Gamma(double t) const {
  return params_.mu / (1.0 + t) - 2.0 * rho_log_derivative(t);
}

// ---------------------------------------------------------------------------

PowerIntegral psi_power_integral(double r_exp, double t, const TestFunctionKit& kit) {
  const int N = kit.params().N;
  const double edge = t + kit.params().R;
  const double log_rho_t = kit.log_rho(t);
  // φ is increasing, so the integrand peaks at the edge of the ball.
  const double shift =
      r_exp * (log_rho_t + log_phi(edge, N)) + (N - 1) * std::log(edge);
  auto f = [&](double r) {
    if (N > 1 && r == 0.0) return 0.0;
    const double lw = (N - 1) * std::log(std::max(r, 1e-300));
    return std::exp(r_exp * (log_rho_t + log_phi(r, N)) + (N == 1 ? 0.0 : lw) - shift);
  };
  const auto res = quad::simpson_adaptive(f, 0.0, edge, 1e-8, 256, 18);
  PowerIntegral out;
  out.log_value = shift + std::log(sphere_measure(N) * res.value);
  out.value = std::exp(out.log_value);
  out.converged = res.converged;
  return out;
}

GrowthFit psi_integral_bound(double r_exp, const TestFunctionKit& kit, double t_lo, double t_hi,
                             int n_points) {
  GrowthFit fit;
  const int N = kit.params().N;
  fit.bound_exponent = (2.0 - r_exp) * (N - 1) / 2.0;
  fit.converged = true;
  std::vector<double> x;
  for (int i = 0; i < n_points; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, double(i) / (n_points - 1));
    const auto I = psi_power_integral(r_exp, t, kit);
    fit.converged = fit.converged && I.converged;
    fit.t.push_back(t);
    fit.log_ratio.push_back(I.log_value - r_exp * (kit.log_rho(t) + t));
    x.push_back(std::log1p(t));
  }
  const double n = n_points;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n_points; ++i) {
    sx += x[i];
    sy += fit.log_ratio[i];
    sxx += x[i] * x[i];
    sxy += x[i] * fit.log_ratio[i];
  }
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.log_prefactor = (sy - fit.exponent * sx) / n;
  return fit;
}

double phi_laplacian_fd(double r, int N) {
  const double h = std::min(4e-3, 0.25 * r);
  const double fm2 = phi(r - 2 * h, N), fm1 = phi(r - h, N), f0 = phi(r, N);
  const double fp1 = phi(r + h, N), fp2 = phi(r + 2 * h, N);
  const double d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
  if (N == 1) return d2;
  const double d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
  return d2 + (N - 1) / r * d1;
}

double phi_laplacian_residual(double r, int N) {
  const double ph = phi(r, N);
  return std::abs(phi_laplacian_fd(r, N) - ph) / ph;
}

double conjugate_residual(double r, double t, const TestFunctionKit& kit) {
  const int N = kit.params().N;
  const double s = 1.0 + t;
  const double mu = kit.params().mu;
  const double nu2 = kit.params().nu * kit.params().nu;
  const RhoJet j = kit.rho_jet_scaled(t);
  const double ph = phi(r, N);
  const double lap = phi_laplacian_fd(r, N);
  const double terms[] = {j.d2 * ph, -j.value * lap, -mu / s * j.d1 * ph,
                          mu / (s * s) * j.value * ph, nu2 / (s * s) * j.value * ph};
  double sum = 0.0;
  double biggest = 0.0;
  for (double x : terms) {
    sum += x;
    biggest = std::max(biggest, std::abs(x));
  }
  return std::abs(sum) / biggest;
}

}  // namespace blowuplab::testfunc
