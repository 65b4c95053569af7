#pragma once

#include <vector>

#include "blowuplab/exponents.hpp"

namespace blowuplab::testfunc {

/// Surface measure of S^{N-1}; 2 for N = 1 (the two endpoints of the line).
double sphere_measure(int N);

/// Radial profile of the spherical average of e^{x.w}: 2 cosh r for N = 1,
/// (2π)^{N/2} r^{1-N/2} I_{N/2-1}(r) otherwise. Satisfies Δφ = φ.
double phi(double r, int N);
double log_phi(double r, int N);
double phi_prime(double r, int N);

/// e^t times (ρ, ρ', ρ''); ρ itself decays like e^{-t}.
struct RhoJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Test functions bound to one (μ, ν) pair with δ >= 0.
class TestFunctionKit {
 public:
  /// Throws exponents::DomainError if δ < 0.
  explicit TestFunctionKit(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  double delta() const { return delta_; }
  double xi() const { return xi_; }
  double alpha() const { return alpha_; }

  /// ρ(t) = (1+t)^{(μ+1)/2} K_{√δ/2}(1+t).
  double rho(double t) const;
  double log_rho(double t) const;
  double rho_prime(double t) const;
  RhoJet rho_jet_scaled(double t) const;
  /// ρ'/ρ via the Bessel ratio, never by differencing.
  double rho_log_derivative(double t) const;
  /// |ρ'' - ρ - (μρ/(1+t))' + ν²ρ/(1+t)²| over the largest term.
  double rho_ode_residual(double t) const;

  double psi(double r, double t) const;
  double log_psi(double r, double t) const;
  double psi0(double r, double t) const;

  double m(double t) const;
  double zeta(double t) const;
  double M_mult(double t) const;
  double Gamma(double t) const;

  /// K_{√δ/2}(1) and K_{√δ/2+1}(1).
  double k_at_one() const { return k0_one_; }
  double k1_at_one() const { return k1_one_; }

 private:
  ModelParams params_;
  double delta_ = 0.0;
  double xi_ = 0.0;
  double alpha_ = 0.0;
  double k0_one_ = 0.0;
  double k1_one_ = 0.0;
};

struct PowerIntegral {
  double value = 0.0;      // may be inf when out of double range
  double log_value = 0.0;  // always finite for positive integrands
  bool converged = false;
};

/// ∫_{|x| <= t+R} ψ(x,t)^r dx by radial Simpson quadrature in log space.
PowerIntegral psi_power_integral(double r_exp, double t, const TestFunctionKit& kit);

struct GrowthFit {
  double exponent = 0.0;        // slope of log(∫ψ^r / (ρ^r e^{rt})) vs log(1+t)
  double log_prefactor = 0.0;   // fitted log C, reported only
  double bound_exponent = 0.0;  // (2-r)(N-1)/2
  std::vector<double> t;
  std::vector<double> log_ratio;
  bool converged = false;
};

/// Growth exponent of ∫ψ^r / (ρ^r e^{rt}) over a log-spaced grid on [t_lo, t_hi].
GrowthFit psi_integral_bound(double r_exp, const TestFunctionKit& kit, double t_lo = 10.0,
                             double t_hi = 200.0, int n_points = 12);

/// Finite-difference Laplacian of φ (5-point, radial form).
double phi_laplacian_fd(double r, int N);
/// |Δφ - φ| / φ with Δ by finite differences.
double phi_laplacian_residual(double r, int N);

/// Residual of the conjugate equation for ψ at (r, t) over the largest term:
/// analytic t-derivatives, finite differences in r.
double conjugate_residual(double r, double t, const TestFunctionKit& kit);

}  // namespace blowuplab::testfunc
