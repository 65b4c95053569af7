#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blowuplab/specfun.hpp"

using namespace blowuplab::specfun;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Half-integer closed forms, independent of the quadrature route.
double k_half(double t) { return std::sqrt(std::numbers::pi / (2.0 * t)) * std::exp(-t); }
double k_three_halves(double t) { return k_half(t) * (1.0 + 1.0 / t); }
double i_half(double r) { return std::sqrt(2.0 / (std::numbers::pi * r)) * std::sinh(r); }
double i_three_halves(double r) {
  return std::sqrt(2.0 / (std::numbers::pi * r)) * (std::cosh(r) - std::sinh(r) / r);
}

// Power series sum (r/2)^{2k} / (k!)^2 for I_0.
double i0_series_oracle(double r) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= (0.25 * r * r) / (double(k) * k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_SUITE("specfun") {
  TEST_CASE("bessel_k matches half-integer closed forms") {
    CHECK(bessel_k(0.5, 1.0) == doctest::Approx(0.46106850444789).epsilon(1e-10));
    CHECK(bessel_k(0.5, 2.0) == doctest::Approx(0.1199377719).epsilon(1e-9));
    for (double t : {1e-2, 0.1, 0.5, 1.0, 3.0, 10.0, 50.0, 200.0, 500.0}) {
      CAPTURE(t);
      CHECK(rel_err(bessel_k(0.5, t), k_half(t)) < 1e-10);
      CHECK(rel_err(bessel_k(1.5, t), k_three_halves(t)) < 1e-10);
    }
  }

  TEST_CASE("bessel_k agrees with the library special function on the contract range") {
    double worst = 0.0;
    for (double xi : {0.0, 0.3, 1.0, 2.0615528, 4.5, 10.0, 17.25, 25.0}) {
      for (double t : {1e-2, 0.05, 0.3, 1.0, 2.5, 7.0, 20.0, 60.0, 150.0, 400.0, 500.0}) {
        const double ref = std::cyl_bessel_k(xi, t);
        if (!(ref > 0.0) || !std::isfinite(ref)) continue;
        worst = std::max(worst, rel_err(bessel_k(xi, t), ref));
      }
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("bessel_k is positive and strictly decreasing in t") {
    for (double xi : {0.0, 0.5, 2.0, 8.0}) {
      double prev = bessel_k(xi, 0.01);
      for (double t = 0.05; t < 300.0; t *= 1.3) {
        const double v = bessel_k(xi, t);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
      }
    }
  }

  TEST_CASE("bessel_k_dt uses the recurrence and matches a centred difference") {
    const double a = bessel_k_dt(0.5, 1.0);
    CHECK(a == doctest::Approx(-k_three_halves(1.0) + 0.5 * k_half(1.0)).epsilon(1e-10));
    CHECK(a == doctest::Approx(-0.6916027567).epsilon(1e-9));
    for (double t : {0.1, 1.0, 7.0}) CHECK(bessel_k_dt(0.0, t) == -bessel_k(1.0, t));

    const double h = 1e-5;
    double worst = 0.0;
    for (double xi = 0.0; xi <= 5.0 + 1e-12; xi += 0.25) {
      for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
        const double fd = (bessel_k(xi, t + h) - bessel_k(xi, t - h)) / (2.0 * h);
        worst = std::max(worst, rel_err(fd, bessel_k_dt(xi, t)));
      }
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("large-argument ratio to sqrt(pi/2t) e^-t") {
    for (double xi : {0.0, 1.0, 2.0, 3.0}) {
      const double ratio = std::exp(log_bessel_k(xi, 200.0) - std::log(k_half(200.0)));
      // Two-term Hankel expansion as the oracle; for xi = 3 the deviation is about 0.0219.
      const double m = 4.0 * xi * xi;
      const double hankel = 1.0 + (m - 1.0) / 1600.0 + (m - 1.0) * (m - 9.0) / (2.0 * 1600.0 * 1600.0);
      CHECK(ratio == doctest::Approx(hankel).epsilon(1e-5));
      if (xi <= 2.0) CHECK(std::abs(ratio - 1.0) <= 0.02);
    }
    // Deviation shrinks as t grows.
    const double d1 = std::abs(bessel_k(1.0, 50.0) / k_half(50.0) - 1.0);
    const double d2 = std::abs(bessel_k(1.0, 400.0) / k_half(400.0) - 1.0);
    CHECK(d2 < d1);
  }

  TEST_CASE("underflow is signalled, log scale stays finite") {
    CHECK_THROWS_AS(bessel_k(0.0, 800.0), UnderflowError);
    const auto e = bessel_k_eval(0.0, 800.0);
    CHECK(e.status == EvalStatus::underflow);
    CHECK(e.value == 0.0);
    CHECK(e.log_value == doctest::Approx(std::log(k_half(1.0)) + 0.5 * std::log(1.0 / 800.0) - 799.0)
                             .epsilon(1e-3));
    CHECK(std::isfinite(log_bessel_k(3.0, 5000.0)));
    CHECK(bessel_k_ratio(0.5, 2000.0) == doctest::Approx(1.0 + 1.0 / 2000.0).epsilon(1e-12));
  }

  TEST_CASE("bessel_k domain errors") {
    CHECK_THROWS_AS(bessel_k(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_k(0.5, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_k(-0.5, 1.0), DomainError);
  }

  TEST_CASE("bessel_i values and closed forms") {
    CHECK(bessel_i(0.0, 0.0) == 1.0);
    CHECK(bessel_i(2.0, 0.0) == 0.0);
    CHECK(bessel_i(0.0, 1.0) == doctest::Approx(1.2660658778).epsilon(1e-10));
    CHECK(rel_err(bessel_i(0.0, 1.0), i0_series_oracle(1.0)) < 1e-14);
    for (double r : {0.01, 0.5, 1.0, 5.0, 19.0, 21.0, 40.0, 100.0}) {
      CAPTURE(r);
      CHECK(rel_err(bessel_i(0.5, r), i_half(r)) < 1e-10);
      CHECK(rel_err(bessel_i(1.5, r), i_three_halves(r)) < 1e-10);
    }
  }

  TEST_CASE("bessel_i agrees with the library special function") {
    double worst = 0.0;
    for (double nu : {0.0, 0.5, 1.0, 2.5, 4.0, 7.0, 10.0}) {
      for (double r : {0.1, 1.0, 3.0, 10.0, 18.0, 20.0, 22.0, 35.0, 60.0, 100.0}) {
        worst = std::max(worst, rel_err(bessel_i(nu, r), std::cyl_bessel_i(nu, r)));
      }
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("series and asymptotic branches agree on the crossover band") {
    double worst = 0.0;
    for (double nu = 0.0; nu <= 10.0; nu += 0.5) {
      for (double r = 18.0; r <= 22.0; r += 0.25) {
        const double s = detail::bessel_i_scaled_series(nu, r);
        const double a = detail::bessel_i_scaled_asymptotic(nu, r);
        worst = std::max(worst, rel_err(a, s));
      }
    }
    CHECK(worst <= 1e-9);
  }

  TEST_CASE("bessel_i positive and increasing") {
    for (double nu : {0.0, 0.5, 3.0}) {
      double prev = bessel_i(nu, 0.05);
      for (double r = 0.1; r < 100.0; r *= 1.4) {
        const double v = bessel_i(nu, r);
        CHECK(v > prev);
        prev = v;
      }
    }
    CHECK_THROWS_AS(bessel_i(0.0, -1.0), DomainError);
  }
}
