#include <doctest.h>

#include <cmath>

#include "blowuplab/linode.hpp"

using namespace blowuplab::linode;

TEST_SUITE("linode") {
  TEST_CASE("mu = nu = 0 with data (1, -1)") {
    // Characteristic roots 0 and -2: F1 = (1 + e^{-2t}) / 2, F2 = (1 - e^{-2t}) / 2.
    const auto tr = solve_appendix_ode(0.0, 0.0, {1.0, -1.0}, 20.0, 1e-10);
    double worst = 0.0, worst_f2 = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      const double e = std::exp(-2 * tr.t[i]);
      worst = std::max(worst, std::abs(tr.F1[i] - 0.5 * (1 + e)));
      worst_f2 = std::max(worst_f2, std::abs(tr.F2[i] - 0.5 * (1 - e)));
    }
    CHECK(worst <= 1e-9);
    CHECK(worst_f2 <= 1e-9);
  }

  TEST_CASE("closed form with mu = 0, nu = 0 and generic data") {
    // F1 = A + B e^{-2t}.
    const auto tr = solve_appendix_ode(0.0, 0.0, {1.0, 0.5}, 10.0, 1e-10);
    const double B = -0.25, A = 1.25;
    for (std::size_t i = 0; i < tr.t.size(); i += 97)
      CHECK(tr.F1[i] == doctest::Approx(A + B * std::exp(-2 * tr.t[i])).epsilon(1e-9));
  }

  TEST_CASE("trace structure") {
    const auto tr = solve_appendix_ode(10.0, 4.0, {1.0, 0.0}, 20.0, 1e-9);
    REQUIRE(tr.t.size() == static_cast<std::size_t>(kDefaultGridPoints));
    CHECK(tr.t.front() == 0.0);
    CHECK(tr.t.back() == doctest::Approx(20.0));
    for (std::size_t i = 1; i < tr.t.size(); ++i) CHECK(tr.t[i] > tr.t[i - 1]);
    for (std::size_t i = 0; i < tr.t.size(); ++i) CHECK(tr.F2[i] == tr.F1_prime[i] + tr.F1[i]);
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < tr.t.size(); ++i) worst = std::max(worst, ode_residual(tr, i));
    CHECK(worst < 1e-5);
  }

  TEST_CASE("figure behaviour") {
    const auto f1 = solve_appendix_ode(10.0, 0.0, {1.0, 0.0}, 20.0, 1e-10);
    CHECK(sign_changes(f1).count == 0);
    for (double v : f1.F2) CHECK(v > 0.0);

    const auto f2 = solve_appendix_ode(10.0, 4.0, {1.0, 0.0}, 20.0, 1e-10);
    CHECK(sign_changes(f2).count >= 1);
    CHECK(final_quarter_sign(f2) == 1);

    const auto f3 = solve_appendix_ode(9.0, 4.0, {1.0, 0.0}, 20.0, 1e-10);
    CHECK(sign_changes(f3).count >= 1);
    CHECK(final_quarter_sign(f3) == 1);

    const auto f4 = solve_appendix_ode(10.0, 20.0, {1.0, 0.0}, 20.0, 1e-10);
    CHECK(sign_changes(f4).count > sign_changes(f2).count);
  }

  TEST_CASE("run_figures summary") {
    const auto figs = run_figures();
    REQUIRE(figs.size() == 4);
    CHECK(figs[0].sign_changes == 0);
    CHECK(figs[2].delta == 0.0);
    CHECK(figs[3].delta < 0.0);
  }

  TEST_CASE("sign_changes on synthetic data") {
    std::vector<double> t{0, 1, 2, 3}, v{1, 2, 3, 4};
    CHECK(sign_changes(t, v).count == 0);
    std::vector<double> w{1, -1e-20, 1, -1};
    CHECK(sign_changes(t, w).count == 1);
    CHECK(sign_changes(t, w).times.at(0) == 3.0);
  }

  TEST_CASE("refinement and linearity") {
    for (double tol : {1e-6, 1e-8}) {
      const auto a = solve_appendix_ode(10.0, 4.0, {1.0, 0.0}, 20.0, tol);
      const auto b = solve_appendix_ode(10.0, 4.0, {1.0, 0.0}, 20.0, tol / 2);
      CHECK(std::abs(a.F2.back() - b.F2.back()) <= 10 * tol * std::abs(b.F2.back()));
    }
    const auto a = solve_appendix_ode(9.0, 4.0, {1.0, 0.0}, 20.0, 1e-10);
    const auto s = solve_appendix_ode(9.0, 4.0, {3.0, 0.0}, 20.0, 1e-10);
    for (std::size_t i = 0; i < a.t.size(); i += 50)
      CHECK(s.F2[i] == doctest::Approx(3.0 * a.F2[i]).epsilon(1e-10));
  }

  TEST_CASE("nu = 0 keeps F2 nonnegative for positive data") {
    for (double mu : {0.5, 2.0, 10.0}) {
      for (auto ic : {std::pair{1.0, 0.0}, std::pair{0.2, 1.0}, std::pair{1.0, 3.0}}) {
        const auto tr = solve_appendix_ode(mu, 0.0, ic, 20.0, 1e-10);
        for (double v : tr.F2) CHECK(v >= 0.0);
      }
    }
  }

  TEST_CASE("invalid arguments") {
    CHECK_THROWS(solve_appendix_ode(1, 0, {1, 0}, -1.0, 1e-8));
    CHECK_THROWS(solve_appendix_ode(1, 0, {1, 0}, 1.0, 1e-3));
  }
}
