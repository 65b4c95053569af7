#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "blowuplab/lifespan.hpp"

using namespace blowuplab;
using namespace blowuplab::lifespan;

namespace {

const std::vector<double> kEps{0.4, 0.28, 0.2, 0.14, 0.1};

ModelParams derivative_case(double nu = 0.4) {
  ModelParams p;
  p.mu = 2;
  p.nu = nu;
  p.p = 1.5;
  p.a = 1;
  p.b = 0;
  p.N = 1;
  return p;
}

std::vector<Record> synthetic(const std::vector<double>& eps, double C, double e) {
  std::vector<Record> out;
  for (double x : eps) {
    Record r;
    r.eps = x;
    r.T_est = C * std::pow(x, -e);
    r.converged = true;
    r.status = wave::Status::blew_up;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("lifespan") {
  TEST_CASE("fit_powerlaw on exact data") {
    std::vector<double> T;
    for (double e : kEps) T.push_back(5.0 * std::pow(e, -1.5));
    const PowerFit f = fit_powerlaw(kEps, T);
    CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-12));
    CHECK(std::abs(f.r_squared - 1.0) <= 1e-10);

    const PowerFit flat = fit_powerlaw(kEps, std::vector<double>(kEps.size(), 7.0));
    CHECK(std::abs(flat.slope) <= 1e-12);
  }

  TEST_CASE("fit_powerlaw errors") {
    CHECK_THROWS(fit_powerlaw({0.1, 0.1, 0.1}, {1.0, 2.0, 3.0}));
    CHECK_THROWS(fit_powerlaw({0.2, 0.1}, {1.0, 2.0}));
    CHECK_THROWS(fit_powerlaw({0.3, 0.2, 0.1}, {1.0, -2.0, 3.0}));
  }

  TEST_CASE("fit_powerlaw with 5% multiplicative noise") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> noise(0.0, 0.05);
    int within = 0;
    double mean = 0.0;
    const int trials = 400;
    for (int k = 0; k < trials; ++k) {
      std::vector<double> T;
      for (double e : kEps) T.push_back(5.0 * std::pow(e, -1.5) * std::exp(noise(rng)));
      const double s = fit_powerlaw(kEps, T).slope;
      mean += s / trials;
      if (std::abs(s - 1.5) <= 0.1) ++within;
    }
    CHECK(std::abs(mean - 1.5) <= 0.01);
    CHECK(within >= 0.9 * trials);
  }

  TEST_CASE("verdicts on synthetic records") {
    const ModelParams p = derivative_case();
    const SweepResult ok = analyze(p, synthetic(kEps, 4.0, 0.85), 0.25);
    CHECK(ok.verdict == Verdict::consistent);
    CHECK(ok.theory.value == doctest::Approx(1.0));
    CHECK_FALSE(ok.slope_exceeds_theory);

    std::vector<Record> bad = synthetic(kEps, 4.0, 1.0);
    bad.back().T_est *= 2.0;
    CHECK(analyze(p, bad, 0.25).verdict == Verdict::bound_violated);

    const SweepResult steep_slope = analyze(p, synthetic(kEps, 4.0, 1.5), 0.25);
    CHECK(steep_slope.slope_exceeds_theory);

    // Verdict does not depend on record order.
    std::vector<Record> shuffled = synthetic(kEps, 4.0, 0.85);
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[1], shuffled[3]);
    const SweepResult again = analyze(p, shuffled, 0.25);
    CHECK(again.verdict == ok.verdict);
    CHECK(again.fit->slope == doctest::Approx(ok.fit->slope));
    CHECK(again.records.front().eps == 0.4);

    CHECK(analyze(p, synthetic({0.4, 0.2}, 4.0, 1.0), 0.25).verdict == Verdict::inconclusive);

    std::vector<Record> partial = synthetic(kEps, 4.0, 1.0);
    for (std::size_t i = 0; i < 3; ++i) partial[i].converged = false;
    CHECK(analyze(p, partial, 0.25).verdict == Verdict::inconclusive);
  }

  TEST_CASE("dropping the largest eps does not flip a consistent verdict") {
    const ModelParams p = derivative_case();
    for (double e : {0.7, 0.85, 1.0}) {
      const std::vector<Record> recs = synthetic(kEps, 4.0, e);
      REQUIRE(analyze(p, recs, 0.25).verdict == Verdict::consistent);
      const std::vector<Record> rest(recs.begin() + 1, recs.end());
      CHECK(analyze(p, rest, 0.25).verdict == Verdict::consistent);
    }
  }

  TEST_CASE("steep exponent falls back to monotonicity") {
    ModelParams p;
    p.mu = 0.5;
    p.nu = 0.0;
    p.p = 5.2;
    p.q = 5.8;
    p.a = 1;
    p.b = 1;
    const SweepResult r = analyze(p, synthetic({0.6, 0.5, 0.4}, 2.0, 7.0), 0.25);
    CHECK(r.theory.value == doctest::Approx(44.5714).epsilon(1e-5));
    CHECK(r.verdict == Verdict::inconclusive);
    REQUIRE(r.fallback_ok.has_value());
    CHECK(*r.fallback_ok);

    std::vector<Record> broken = synthetic({0.6, 0.5, 0.4}, 2.0, 7.0);
    broken[2].T_est = 0.5 * broken[1].T_est;
    CHECK_FALSE(*analyze(p, broken, 0.25).fallback_ok);
    broken[2].status = wave::Status::survived;
    CHECK_FALSE(*analyze(p, broken, 0.25).fallback_ok);
  }

  TEST_CASE("critical case fits against eps^-(p-1)") {
    ModelParams p = derivative_case();
    p.N = 2;
    p.p = 1.0 + 2.0 / (p.N + p.mu - 1.0);
    std::vector<Record> recs = synthetic(kEps, 1.0, 0.0);
    for (Record& r : recs) r.T_est = std::exp(0.8 * std::pow(r.eps, -(p.p - 1.0)));
    const SweepResult res = analyze(p, recs, 0.25);
    CHECK(res.theory.kind == exponents::LifespanExponent::Kind::exponential);
    CHECK(res.fit->slope == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(res.verdict == Verdict::consistent);
  }

  TEST_CASE("worker count honours the environment") {
    setenv("BLOWUPLAB_THREADS", "3", 1);
    CHECK(worker_count() == 3u);
    unsetenv("BLOWUPLAB_THREADS");
    CHECK(worker_count() >= 1u);
  }

  TEST_CASE("plan validation") {
    SweepPlan plan;
    plan.base = derivative_case();
    plan.base.p = 5.0;  // above p_G(N + mu) = 2 with b = 0
    plan.eps_list = kEps;
    CHECK_THROWS(run_sweep(plan));
    plan.base = derivative_case();
    plan.eps_list = {0.4, 0.4, 0.2};
    CHECK_THROWS(run_sweep(plan));
    plan.eps_list = {1.5, 0.2, 0.1};
    CHECK_THROWS(run_sweep(plan));
  }

  TEST_CASE("a short real sweep") {
    SweepPlan plan;
    plan.base = derivative_case();
    plan.eps_list = {0.2, 0.4, 0.28};
    plan.dr_ladder = {0.02, 0.01};
    plan.snapshot_every = 0.5;
    int calls = 0;
    const SweepResult r = run_sweep(plan, [&](const Record& rec, const wave::SimOutcome& o) {
      ++calls;
      CHECK(o.params.eps == rec.eps);
      CHECK_FALSE(o.snapshots.empty());
      CHECK(o.grid.dr == 0.01);
    });
    CHECK(calls == 3);
    REQUIRE(r.records.size() == 3);
    CHECK(r.records[0].eps == 0.4);
    for (std::size_t i = 1; i < 3; ++i) CHECK(r.records[i].T_est > r.records[i - 1].T_est);
    CHECK(r.verdict == Verdict::consistent);
    CHECK(r.fit->slope >= 0.7);
    CHECK(r.fit->slope <= 1.3);

    plan.eps_list = {0.4, 0.2};
    CHECK(run_sweep(plan).verdict == Verdict::inconclusive);
  }
}
