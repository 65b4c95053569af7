#include "blowuplab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "blowuplab/diagnostics.hpp"
#include "blowuplab/lifespan.hpp"
#include "blowuplab/linode.hpp"
#include "blowuplab/specfun.hpp"
#include "blowuplab/testfunc.hpp"
#include "blowuplab/wavesolver.hpp"

namespace blowuplab::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

const std::pair<double, double> kPairs[] = {{1, 0}, {2, 0}, {2, 0.4}, {9, 4}, {10, 4}};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Detail {
  std::ostringstream os;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (os.tellp() > 0) os << "; ";
    os << what << (cond ? "" : " [FAIL]");
  }
};

ModelParams derivative_case(double eps, double nu) {
  ModelParams p;
  p.mu = 2.0;
  p.nu = nu;
  p.p = 1.5;
  p.a = 1;
  p.b = 0;
  p.N = 1;
  p.eps = eps;
  return p;
}

ModelParams combined_case(double eps) {
  ModelParams p;
  p.mu = 0.5;
  p.nu = 0.0;
  p.p = 5.2;
  p.q = 5.8;
  p.a = 1;
  p.b = 1;
  p.N = 1;
  p.R = 2.0;
  p.eps = eps;
  return p;
}

double k_half_closed(double t) { return std::sqrt(M_PI / (2 * t)) * std::exp(-t); }

void c1(Detail& d) {
  using namespace specfun;
  double worst_fd = 0.0;
  const double h = 1e-5;
  for (double xi = 0.0; xi <= 5.0 + 1e-12; xi += 0.25) {
    for (double t : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
      const double fd = (bessel_k(xi, t + h) - bessel_k(xi, t - h)) / (2 * h);
      const double an = bessel_k_dt(xi, t);
      worst_fd = std::max(worst_fd, std::abs(fd - an) / std::abs(an));
    }
  }
  d.check(worst_fd <= 1e-6, "recurrence vs FD max rel " + fmt("%.2e", worst_fd));

  double worst_half = 0.0;
  for (double t = 0.01; t <= 500.0; t *= 1.25) {
    const double k12 = k_half_closed(t);
    const double k32 = k12 * (1 + 1 / t);
    const double k52 = k12 * (1 + 3 / t + 3 / (t * t));
    const double pairs[3][2] = {{log_bessel_k(0.5, t), std::log(k12)},
                                {log_bessel_k(1.5, t), std::log(k32)},
                                {log_bessel_k(2.5, t), std::log(k52)}};
    for (const auto& p : pairs) worst_half = std::max(worst_half, std::abs(std::expm1(p[0] - p[1])));
  }
  d.check(worst_half <= 1e-10, "half-integer closed forms max rel " + fmt("%.2e", worst_half));

  // Orders used by the test functions of the reference (mu, nu) pairs, plus a grid up to 2.5.
  double worst_asym = 0.0;
  std::vector<double> orders{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  for (auto [mu, nu] : kPairs) {
    const double xi = 0.5 * std::sqrt((mu - 1) * (mu - 1) - 4 * nu * nu);
    orders.push_back(xi);
  }
  for (double xi : orders)
    worst_asym = std::max(worst_asym, std::abs(std::exp(log_bessel_k(xi, 200.0) - std::log(k_half_closed(200.0))) - 1));
  d.check(worst_asym <= 0.02, "asymptotic ratio at t=200 max dev " + fmt("%.4f", worst_asym));
  const double dev3 = std::exp(log_bessel_k(3.0, 200.0) - std::log(k_half_closed(200.0))) - 1;
  d.check(std::abs(dev3 - (35.0 / 1600 + 35.0 * 27 / (2.0 * 1600 * 1600))) <= 1e-5,
          "xi=3 dev " + fmt("%.5f", dev3) + " matches Hankel two-term");
}

void c2(Detail& d) {
  double worst_ode = 0.0, worst_ratio = 0.0;
  for (auto [mu, nu] : kPairs) {
    ModelParams p;
    p.mu = mu;
    p.nu = nu;
    testfunc::TestFunctionKit kit(p);
    for (double t = 0.0; t <= 50.0 + 1e-12; t += 0.25) worst_ode = std::max(worst_ode, kit.rho_ode_residual(t));
    for (double t = 10.0; t <= 200.0 + 1e-12; t += 2.0)
      worst_ratio = std::max(worst_ratio, std::abs(kit.rho_log_derivative(t) + 1.0) * t / 8.0);
  }
  d.check(worst_ode <= 1e-8, "rho ODE residual max " + fmt("%.2e", worst_ode));
  d.check(worst_ratio <= 1.0, "max |rho'/rho+1|/(8/t) " + fmt("%.3f", worst_ratio));
}

void c3(Detail& d) {
  double worst_lap = 0.0;
  for (int N : {1, 2, 3})
    for (double r = 0.1; r <= 10.0 + 1e-9; r += 0.1) worst_lap = std::max(worst_lap, testfunc::phi_laplacian_residual(r, N));
  d.check(worst_lap <= 1e-6, "Laplacian residual max " + fmt("%.2e", worst_lap));

  double worst_conj = 0.0;
  for (auto [mu, nu] : kPairs) {
    for (int N : {1, 2, 3}) {
      ModelParams p;
      p.mu = mu;
      p.nu = nu;
      p.N = N;
      testfunc::TestFunctionKit kit(p);
      for (double r = 0.1; r <= 10.0 + 1e-9; r += 0.5)
        for (double t = 0.1; t <= 10.0 + 1e-9; t += 0.5) worst_conj = std::max(worst_conj, testfunc::conjugate_residual(r, t, kit));
    }
  }
  d.check(worst_conj <= 1e-6, "conjugate residual max " + fmt("%.2e", worst_conj));

  double worst_excess = -1e300;
  for (int N : {1, 2, 3}) {
    ModelParams p;
    p.mu = 2.0;
    p.nu = 0.4;
    p.N = N;
    testfunc::TestFunctionKit kit(p);
    for (double r : {2.0, 3.0}) {
      const testfunc::GrowthFit g = testfunc::psi_integral_bound(r, kit);
      worst_excess = std::max(worst_excess, g.exponent - g.bound_exponent);
      if (!g.converged) d.check(false, "growth quadrature did not converge");
    }
  }
  d.check(worst_excess <= 0.1, "growth exponent minus bound, max " + fmt("%.3f", worst_excess));
}

void c4(Detail& d) {
  const auto figs = linode::run_figures();
  const auto& f1 = figs[0];
  const auto& f2 = figs[1];
  const auto& f3 = figs[2];
  const auto& f4 = figs[3];
  d.check(f1.sign_changes == 0, "(10,0) sign changes " + std::to_string(f1.sign_changes));
  d.check(f2.sign_changes >= 1 && f2.final_sign == 1,
          "(10,4) sign changes " + std::to_string(f2.sign_changes) + ", final quarter sign " + std::to_string(f2.final_sign));
  d.check(f3.sign_changes >= 1 && f3.final_sign == 1,
          "(9,4) sign changes " + std::to_string(f3.sign_changes) + ", final quarter sign " + std::to_string(f3.final_sign));
  d.check(f4.sign_changes > f2.sign_changes, "(10,20) sign changes " + std::to_string(f4.sign_changes));
}

void c5(Detail& d) {
  ModelParams v;
  v.mu = 2.0;
  v.nu = 0.4;
  v.a = 0;
  v.b = 0;
  v.eps = 0.1;
  ModelParams w = v;
  w.mu = 1.0;
  w.nu = 0.5;
  testfunc::TestFunctionKit kit(v);
  double rv[2], rw[2], r1[2], rp[2];
  bool support = true;
  double excess = -1e300;
  const double drs[2] = {0.005, 0.0025};
  for (int k = 0; k < 2; ++k) {
    wave::SolverConfig c;
    c.dr = drs[k];
    c.t_max = 10.0;
    c.snapshot_every = 10 * drs[k];
    c.track_support = true;
    const wave::SimOutcome ov = wave::run(v, c);
    const wave::SimOutcome ow = wave::run(w, c);
    support = support && ov.support_ok && ow.support_ok;
    excess = std::max({excess, ov.support_excess_cells, ow.support_excess_cells});
    rv[k] = diag::transform_residual(ov, diag::Transform::damped_v);
    rw[k] = diag::transform_residual(ow, diag::Transform::liouville_w);
    r1[k] = diag::weak_form_residual(ov, diag::TestChoice::one).residual;
    rp[k] = diag::weak_form_residual(ov, diag::TestChoice::psi, &kit).residual;
  }
  d.check(rv[0] <= 5e-2 && rv[1] <= 0.5 * rv[0],
          "DAMPED_V " + fmt("%.2e", rv[0]) + " -> " + fmt("%.2e", rv[1]));
  d.check(rw[0] <= 5e-2 && rw[1] <= 0.5 * rw[0],
          "LIOUVILLE_W " + fmt("%.2e", rw[0]) + " -> " + fmt("%.2e", rw[1]));
  d.check(support, "support excess max " + fmt("%.2f", excess) + " cells (bound 2)");
  d.check(r1[1] <= 0.6 * r1[0], "weak form Phi=1 " + fmt("%.2e", r1[0]) + " -> " + fmt("%.2e", r1[1]));
  d.check(rp[1] <= 0.6 * rp[0], "weak form Phi=psi " + fmt("%.2e", rp[0]) + " -> " + fmt("%.2e", rp[1]));
}

void c6(Detail& d) {
  std::vector<diag::FunctionalTrace> traces;
  const std::vector<double> eps{0.05, 0.1};
  wave::SolverConfig c;
  c.dr = 0.005;
  c.t_max = 25.0;
  c.snapshot_every = 0.05;
  for (double e : eps) {
    const ModelParams p = derivative_case(e, 0.4);
    testfunc::TestFunctionKit kit(p);
    traces.push_back(diag::compute_functionals(wave::run(p, c), kit));
    const diag::G2Check g2 = diag::check_G2(traces.back(), p, e);
    const double limit = 1.2 * -std::log(e);
    d.check(g2.neg_bound_ok && std::isfinite(g2.K_fit) && g2.coercive_from && *g2.coercive_from <= limit,
            "eps=" + fmt("%g", e) + " K_fit " + fmt("%.3g", g2.K_fit) + " coercive_from " +
                (g2.coercive_from ? fmt("%.2f", *g2.coercive_from) : std::string("none")) + " <= " + fmt("%.2f", limit));
  }
  const diag::G1Check g1 = diag::check_G1_coercivity(traces, eps, 1.0, 20.0);
  d.check(g1.pass, "G1 c_fit " + fmt("%.4f", g1.fits[0].c_fit) + "/" + fmt("%.4f", g1.fits[1].c_fit) + " spread " +
                       fmt("%.3f", g1.spread));

  const ModelParams p0 = derivative_case(0.1, 0.0);
  const diag::FunctionalTrace t0 = diag::compute_functionals(wave::run(p0, c), testfunc::TestFunctionKit(p0));
  const diag::G2Check g0 = diag::check_G2(t0, p0, 0.1);
  d.check(g0.min_G2 >= -1e-10 * g0.max_G2, "nu=0 min G2 " + fmt("%.3e", g0.min_G2));
}

void c7(Detail& d) {
  double slopes[2] = {0, 0};
  const double nus[2] = {0.4, 0.0};
  for (int k = 0; k < 2; ++k) {
    lifespan::SweepPlan plan;
    plan.base = derivative_case(0.1, nus[k]);
    plan.eps_list = {0.4, 0.28, 0.2, 0.14, 0.1};
    plan.dr_ladder = {0.01, 0.005};
    const lifespan::SweepResult r = lifespan::run_sweep(plan);
    d.check(std::abs(r.theory.value - 1.0) < 1e-12, "theory exponent " + fmt("%.12g", r.theory.value));
    const bool have = r.fit.has_value();
    slopes[k] = have ? r.fit->slope : NAN;
    d.check(have && slopes[k] >= 0.7 && slopes[k] <= 1.3 && r.verdict == lifespan::Verdict::consistent,
            "nu=" + fmt("%g", nus[k]) + " slope " + fmt("%.4f", slopes[k]) + " " + lifespan::to_string(r.verdict));
  }
  d.check(std::abs(slopes[0] - slopes[1]) <= 0.2, "slope difference " + fmt("%.4f", std::abs(slopes[0] - slopes[1])));
}

void c8(Detail& d) {
  const exponents::ExponentReport rep = exponents::classify(combined_case(0.5));
  d.check(rep.region == exponents::Region::combined_blowup && std::abs(rep.lifespan.value - 44.5714) < 1e-3,
          "exponent " + fmt("%.4f", rep.lifespan.value));
  lifespan::SweepPlan plan;
  plan.base = combined_case(0.5);
  plan.eps_list = {0.6, 0.5, 0.4};
  plan.dr_ladder = {0.02, 0.01};
  plan.snapshot_every = 0.05;
  std::vector<std::string> l_notes;
  bool l_ok = true;
  const lifespan::SweepResult r = lifespan::run_sweep(plan, [&](const lifespan::Record& rec, const wave::SimOutcome& o) {
    if (o.status != wave::Status::blew_up) {
      l_ok = false;
      return;
    }
    const diag::FunctionalTrace tr = diag::compute_functionals(o, testfunc::TestFunctionKit(o.params));
    const diag::InequalityCheck L = diag::check_L_inequality(tr, o.params, o.T_est);
    l_ok = l_ok && L.pass;
    l_notes.push_back("eps=" + fmt("%g", rec.eps) + " c=" + fmt("%.3g", L.c_fit));
  });
  std::string ts;
  bool all_blew = true;
  for (const auto& rec : r.records) {
    ts += (ts.empty() ? "" : ",") + fmt("%.3f", rec.T_est);
    all_blew = all_blew && rec.status == wave::Status::blew_up;
  }
  d.check(all_blew, "T_est " + ts);
  d.check(r.fallback_ok.value_or(false), "non-decreasing in decreasing eps");
  std::string ln;
  for (const auto& s : l_notes) ln += (ln.empty() ? "" : ", ") + s;
  d.check(l_ok && l_notes.size() == 3, "L inequality " + ln);
  d.check(r.verdict == lifespan::Verdict::inconclusive, "slope verdict " + lifespan::to_string(r.verdict));
}

void c9(Detail& d) {
  wave::SolverConfig c;
  c.dr = 0.005;
  c.t_max = 150.0;
  c.snapshot_every = 0.1;
  double worst = 1e300;
  int runs = 0;
  bool ok = true;
  for (double nu : {0.4, 0.0}) {
    for (double e : {0.4, 0.28, 0.2, 0.14, 0.1}) {
      const ModelParams p = derivative_case(e, nu);
      const wave::SimOutcome o = wave::run(p, c);
      if (o.status != wave::Status::blew_up) {
        ok = false;
        continue;
      }
      const diag::FunctionalTrace tr = diag::compute_functionals(o, testfunc::TestFunctionKit(p));
      const diag::G2Check g2 = diag::check_G2(tr, p, e);
      const diag::InequalityCheck H = diag::check_H_inequality(tr, p, e, g2.c_G2, o.T_est);
      ok = ok && H.pass;
      worst = std::min(worst, H.c_fit);
      ++runs;
    }
  }
  d.check(ok && runs == 10, std::to_string(runs) + " runs, min fitted constant " + fmt("%.4f", worst));
}

struct Spec {
  int id;
  const char* name;
  double budget;
  void (*fn)(Detail&);
};

const Spec kSpecs[] = {
    {1, "special-function identities", 5.0, c1},
    {2, "rho ODE residual and log-derivative limit", 5.0, c2},
    {3, "phi, conjugate equation, growth exponents", 30.0, c3},
    {4, "linear ODE sign structure", 5.0, c4},
    {5, "solver verification", 120.0, c5},
    {6, "functional coercivity on simulations", 120.0, c6},
    {7, "derivative-nonlinearity lifespan scaling", 900.0, c7},
    {8, "combined-nonlinearity region properties", 900.0, c8},
    {9, "H inequality along derivative-nonlinearity blow-ups", 0.0, c9},
};

}  // namespace

CriterionResult run_criterion(int id) {
  for (const Spec& s : kSpecs) {
    if (s.id != id) continue;
    CriterionResult r;
    r.id = id;
    r.name = s.name;
    r.budget_seconds = s.budget;
    Detail d;
    const auto t0 = Clock::now();
    try {
      s.fn(d);
    } catch (const std::exception& e) {
      d.check(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (s.budget > 0.0) d.check(r.seconds < s.budget, "runtime " + fmt("%.1f", r.seconds) + " s < " + fmt("%g", s.budget) + " s");
    r.pass = d.ok;
    r.detail = d.os.str();
    return r;
  }
  throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
}

const std::vector<int>& fast_suite() {
  static const std::vector<int> ids{1, 2, 3, 4, 5, 6, 9};
  return ids;
}

std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s  %2d  %s  (%.1f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  return std::string(head) + "  " + r.detail;
}

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, std::ostream& out) {
  std::vector<CriterionResult> all;
  for (int id : ids) {
    all.push_back(run_criterion(id));
    out << format_line(all.back()) << std::endl;
  }
  return all;
}

}  // namespace blowuplab::acceptance
