#include <doctest.h>

#include <cmath>
#include <random>

#include "blowuplab/exponents.hpp"

using namespace blowuplab;
using namespace blowuplab::exponents;

namespace {

// Bisection oracle for the positive root of (d-1) q^2 - (d+1) q - 2.
double strauss_bisection(double d) {
  auto f = [d](double q) { return (d - 1.0) * q * q - (d + 1.0) * q - 2.0; };
  double lo = 1.0, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ModelParams make(double mu, double nu, double p, double q, int N, int a, int b) {
  ModelParams m;
  m.mu = mu;
  m.nu = nu;
  m.p = p;
  m.q = q;
  m.N = N;
  m.a = a;
  m.b = b;
  return m;
}

}  // namespace

TEST_SUITE("exponents") {
  TEST_CASE("delta") {
    CHECK(delta(9, 4) == 0.0);
    CHECK(delta(10, 0) == 81.0);
    CHECK(delta(10, 20) == -1519.0);
  }

  TEST_CASE("alpha is the smaller root") {
    CHECK(alpha(2, 0) == 0.0);
    CHECK(alpha(1, 0) == 0.0);
    const double a = alpha(10, 4);
    CHECK(a == doctest::Approx((9.0 - std::sqrt(17.0)) / 2.0).epsilon(1e-15));
    CHECK(a == doctest::Approx(2.438447187).epsilon(1e-9));
    CHECK(std::abs(a * a - 9.0 * a + 16.0) < 1e-13);
    CHECK_THROWS_AS(alpha(1, 1), DomainError);
  }

  TEST_CASE("root identity over random admissible (mu, nu)") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mu_dist(0.0, 20.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double mu = mu_dist(rng);
      const double nu = frac(rng) * std::abs(mu - 1.0) / 2.0;  // keeps delta >= 0
      const double a = alpha(mu, nu);
      const double scale = std::max(1.0, mu * mu);
      CHECK(std::abs(a * a - (mu - 1.0) * a + nu * nu) <= 1e-12 * scale);
    }
  }

  TEST_CASE("Glassey exponent") {
    CHECK(p_glassey(2) == 3.0);
    CHECK(p_glassey(3) == 2.0);
    CHECK(p_glassey(1.5) == doctest::Approx(5.0));
    CHECK((1.5 - 1.0) * (p_glassey(1.5) - 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(p_glassey(1.0), DomainError);
    for (double d = 1.1; d <= 50.0; d += 0.7) {
      CHECK(std::abs((d - 1.0) * p_glassey(d) - 2.0 - (d - 1.0)) <= 1e-12 * d);
    }
  }

  TEST_CASE("Strauss exponent") {
    CHECK(q_strauss(3) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(q_strauss(2) == doctest::Approx((3.0 + std::sqrt(17.0)) / 2.0).epsilon(1e-12));
    CHECK(q_strauss(3) == doctest::Approx(2.4142135624).epsilon(1e-10));
    CHECK(q_strauss(2) == doctest::Approx(3.5615528128).epsilon(1e-10));
    CHECK_THROWS_AS(q_strauss(0.5), DomainError);
    for (double d = 1.01; d <= 50.0; d += 0.37) {
      const double q = q_strauss(d);
      CHECK(std::abs((d - 1.0) * q * q - (d + 1.0) * q - 2.0) <= 1e-12 * std::max(1.0, q * q));
      CHECK(q == doctest::Approx(strauss_bisection(d)).epsilon(1e-12));
    }
  }

  TEST_CASE("Fujita exponent and lambda") {
    CHECK(q_fujita(1) == 3.0);
    CHECK(q_fujita(2) == 2.0);
    CHECK(q_fujita(4.5) == doctest::Approx(1.4444444444));
    CHECK(lambda(5.2, 5.8, 1.5) == doctest::Approx(2.88));
    CHECK(lambda(2, 2, 3) == doctest::Approx(2.0));
    CHECK(std::abs(lambda(3.0, 1.0 + 1e-12, 2.5)) < 1e-10);
  }

  TEST_CASE("sigma branches") {
    CHECK(sigma(10, 4) == 10.0);
    CHECK(sigma(2, 0.4) == doctest::Approx(2.4));
    CHECK(sigma(1, 0) == 2.0);
    CHECK_THROWS_AS(sigma(1, 2), DomainError);
  }

  TEST_CASE("classify: combined-nonlinearity region") {
    auto rep = classify(make(0.5, 0.0, 5.2, 5.8, 1, 1, 1));
    CHECK(rep.region == Region::combined_blowup);
    CHECK(rep.p_glassey_shifted == doctest::Approx(5.0));
    CHECK(rep.q_strauss_shifted == doctest::Approx(2.5 + std::sqrt(10.25)));
    CHECK(rep.lambda_shifted == doctest::Approx(2.88));
    CHECK(rep.lifespan.kind == LifespanExponent::Kind::power);
    CHECK(rep.lifespan.value == doctest::Approx(2.0 * 5.2 * 4.8 / (4.0 - 2.88)));
    CHECK(rep.lifespan.value == doctest::Approx(44.5714286).epsilon(1e-8));
  }

  TEST_CASE("classify: derivative nonlinearity") {
    auto sub = classify(make(2.0, 0.4, 1.5, 2.0, 1, 1, 0));
    CHECK(sub.region == Region::derivative_subcritical);
    CHECK(sub.lifespan.value == doctest::Approx(1.0));
    CHECK(*sub.sigma == doctest::Approx(2.4));

    auto crit = classify(make(2.0, 0.0, 2.0, 2.0, 1, 1, 0));
    CHECK(crit.region == Region::derivative_critical);
    CHECK(crit.lifespan.kind == LifespanExponent::Kind::exponential);
    CHECK(crit.lifespan.value == doctest::Approx(1.0));

    auto above = classify(make(2.0, 0.0, 2.5, 2.0, 1, 1, 0));
    CHECK(above.region == Region::outside_scope);
  }

  TEST_CASE("classify: outside scope and region invariant") {
    auto neg = classify(make(10.0, 20.0, 1.5, 2.0, 1, 1, 0));
    CHECK(neg.region == Region::outside_scope);
    CHECK_FALSE(neg.alpha.has_value());

    // Combined region iff delta >= 0, p > pG, q > qS, lambda < 4 (with a = b = 1).
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      const double mu = 3.0 * u01(rng);
      const double nu = 1.5 * u01(rng);
      const double p = 1.05 + 6.0 * u01(rng);
      const double q = 1.05 + 6.0 * u01(rng);
      const int N = 1 + static_cast<int>(2.0 * u01(rng));
      const auto rep = classify(make(mu, nu, p, q, N, 1, 1));
      const double d = N + mu;
      const bool expect = delta(mu, nu) >= 0.0 && d > 1.0 && p > p_glassey(d) &&
                          q > q_strauss(d) && lambda(p, q, d) < 4.0;
      CHECK((rep.region == Region::combined_blowup) == expect);
      CHECK(classify(make(mu, nu, p, q, N, 1, 1)).region == rep.region);
    }
  }

  TEST_CASE("validate rejects hypothesis violations") {
    auto ok = make(2.0, 0.4, 1.5, 5.0, 3, 1, 0);
    CHECK_NOTHROW(validate(ok));
    ok.q = 7.0;
    CHECK_THROWS_AS(validate(ok), ParamError);
    ok.q = 2.0;
    ok.p = 1.0;
    CHECK_THROWS_AS(validate(ok), ParamError);
  }
}
