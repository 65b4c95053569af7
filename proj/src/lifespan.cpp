#include "blowuplab/lifespan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace blowuplab::lifespan {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "CONSISTENT";
    case Verdict::bound_violated: return "BOUND_VIOLATED";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

PowerFit fit_loglinear(const std::vector<double>& x, const std::vector<double>& T) {
  if (x.size() != T.size()) throw std::invalid_argument("fit: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("fit: need at least 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(T[i] > 0.0)) throw std::invalid_argument("fit: lifespans must be positive");
    mx += x[i];
    my += std::log(T[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = std::log(T[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 1e-300 * (1.0 + mx * mx)) throw std::invalid_argument("fit: singular (all abscissae equal)");
  PowerFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

PowerFit fit_powerlaw(const std::vector<double>& eps, const std::vector<double>& T) {
  std::vector<double> x;
  for (double e : eps) {
    if (!(e > 0.0)) throw std::invalid_argument("fit: eps must be positive");
    x.push_back(std::log(1.0 / e));
  }
  return fit_loglinear(x, T);
}

unsigned worker_count() {
  if (const char* env = std::getenv("BLOWUPLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult analyze(const ModelParams& base, std::vector<Record> records, double tol) {
  SweepResult res;
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) { return a.eps > b.eps; });
  res.records = std::move(records);
  res.theory = exponents::classify(base).lifespan;

  std::vector<double> eps, T;
  for (const Record& r : res.records) {
    if (r.converged) {
      eps.push_back(r.eps);
      T.push_back(r.T_est);
    }
  }

  const bool steep = res.theory.kind == exponents::LifespanExponent::Kind::power &&
                     res.theory.value > kMeasurableExponent;
  if (steep) {
    bool ok = !res.records.empty();
    for (std::size_t i = 0; i < res.records.size(); ++i) {
      const Record& r = res.records[i];
      ok = ok && r.status == wave::Status::blew_up && std::isfinite(r.T_est);
      if (i > 0 && ok) ok = r.T_est >= 0.98 * res.records[i - 1].T_est;
    }
    res.fallback_ok = ok;
  }

  if (eps.size() < 3) {
    res.verdict = Verdict::inconclusive;
    res.note = "fewer than 3 converged records";
    return res;
  }

  if (res.theory.kind == exponents::LifespanExponent::Kind::exponential) {
    std::vector<double> x;
    for (double e : eps) x.push_back(std::pow(e, -(base.p - 1.0)));
    res.fit = fit_loglinear(x, T);
    bool violated = false;
    for (std::size_t i = 0; i < x.size(); ++i)
      violated = violated || T[i] > std::exp(res.fit->intercept + res.fit->slope * x[i]) * (1.0 + tol);
    res.log_C_fit = res.fit->intercept;
    res.verdict = violated ? Verdict::bound_violated : Verdict::consistent;
    res.note = "critical case: log T fitted against eps^-(p-1)";
    return res;
  }

  res.fit = fit_powerlaw(eps, T);
  if (res.theory.kind != exponents::LifespanExponent::Kind::power) {
    res.verdict = Verdict::inconclusive;
    res.note = "no theory exponent for these parameters";
    return res;
  }
  const double e = res.theory.value;
  res.slope_exceeds_theory = res.fit->slope > e + 0.3;
  if (steep) {
    res.verdict = Verdict::inconclusive;
    res.note = "theory exponent too steep to measure; see fallback";
    return res;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) acc += std::log(T[i]) - e * std::log(1.0 / eps[i]);
  res.log_C_fit = acc / eps.size();
  bool violated = false;
  for (std::size_t i = 0; i < eps.size(); ++i)
    violated = violated || T[i] > std::exp(res.log_C_fit) * std::pow(eps[i], -e) * (1.0 + tol);
  res.verdict = violated ? Verdict::bound_violated : Verdict::consistent;
  return res;
}

namespace {

Record run_one(const SweepPlan& plan, double eps, double horizon, const OutcomeHook& hook) {
  ModelParams p = plan.base;
  p.eps = eps;
  wave::SolverConfig cfg;
  cfg.cfl = plan.cfl;
  cfg.threshold = plan.threshold;
  cfg.snapshot_every = plan.snapshot_every;
  Record rec;
  rec.eps = eps;
  for (int attempt = 0; attempt < 2; ++attempt) {
    cfg.t_max = horizon;
    wave::SimOutcome finest;
    const wave::LifespanEstimate est = wave::estimate_lifespan(p, plan.dr_ladder, cfg, hook ? &finest : nullptr);
    rec.T_est = est.T_eps;
    rec.converged = est.converged;
    rec.status = est.status;
    rec.T_ladder = est.T;
    rec.grid_dr = est.dr.back();
    rec.t_max = horizon;
    if (est.status == wave::Status::survived && attempt == 0 && horizon < plan.max_horizon) {
      horizon = std::min(plan.max_horizon, 3.0 * horizon);
      rec.retried = true;
      continue;
    }
    if (hook) hook(rec, finest);
    break;
  }
  return rec;
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, const OutcomeHook& hook) {
  const exponents::ExponentReport rep = exponents::classify(plan.base);
  if (rep.region == exponents::Region::outside_scope)
    throw std::invalid_argument("sweep parameters are outside the blow-up theorems (" + rep.note + ")");
  std::vector<double> eps = plan.eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] < 1.0)) throw std::invalid_argument("eps values must lie in (0, 1)");
    if (i > 0 && eps[i] == eps[i - 1]) throw std::invalid_argument("eps values must be distinct");
  }
  if (eps.empty()) throw std::invalid_argument("empty eps list");

  std::vector<Record> records(eps.size());
  std::mutex hook_mutex;
  const OutcomeHook guarded = hook ? OutcomeHook([&](const Record& r, const wave::SimOutcome& o) {
    std::lock_guard<std::mutex> lock(hook_mutex);
    hook(r, o);
  })
                                   : OutcomeHook{};

  // The largest eps sets the time scale for the rest.
  records[0] = run_one(plan, eps[0], plan.first_horizon, guarded);
  const bool anchored = records[0].status == wave::Status::blew_up;
  auto horizon_for = [&](double e) {
    if (!anchored) return plan.max_horizon;
    const double T0 = records[0].T_est;
    double pred;
    if (rep.lifespan.kind == exponents::LifespanExponent::Kind::exponential) {
      pred = std::exp(std::log(std::max(T0, 1.0 + 1e-9)) * std::pow(eps[0] / e, plan.base.p - 1.0));
    } else {
      pred = T0 * std::pow(eps[0] / e, rep.lifespan.value);
    }
    return std::min(plan.max_horizon, std::max(plan.safety * pred, plan.safety * T0));
  };

  std::atomic<std::size_t> next{1};
  auto worker = [&] {
    for (std::size_t i = next++; i < eps.size(); i = next++) records[i] = run_one(plan, eps[i], horizon_for(eps[i]), guarded);
  };
  const unsigned n = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(1, eps.size() - 1)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  return analyze(plan.base, std::move(records), plan.tol);
}

}  // namespace blowuplab::lifespan
