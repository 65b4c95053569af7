#include "blowuplab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blowuplab::diag {

using testfunc::TestFunctionKit;
using wave::Snapshot;
using wave::SpatialGrid;

namespace {

void require_snapshots(const wave::SimOutcome& o) {
  if (o.snapshots.empty())
    throw MissingSnapshots("run has no snapshots; rerun with a snapshot cadence (e.g. every 0.05 time units)");
}

std::vector<double> log_phi_on_grid(const SpatialGrid& grid, int N) {
  std::vector<double> out(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) out[i] = testfunc::log_phi(grid.radius(i), N);
  return out;
}

double lap(const SpatialGrid& g, const std::vector<double>& u, std::size_t first, std::size_t j) {
  const double inv = 1.0 / (g.dr * g.dr);
  auto at = [&](long k) { return k < 0 || k >= static_cast<long>(u.size()) ? 0.0 : u[k]; };
  const long jj = static_cast<long>(j);
  const std::size_t i = first + j;
  if (g.geometry == wave::Geometry::radial && i == 0) return g.N * 2.0 * (at(jj + 1) - at(jj)) * inv;
  double v = (at(jj + 1) - 2.0 * at(jj) + at(jj - 1)) * inv;
  if (g.geometry == wave::Geometry::radial && g.N > 1)
    v += (g.N - 1) / g.radius(i) * (at(jj + 1) - at(jj - 1)) / (2.0 * g.dr);
  return v;
}

double grad(const SpatialGrid& g, const std::vector<double>& u, std::size_t first, std::size_t j) {
  const std::size_t i = first + j;
  if (g.geometry == wave::Geometry::radial && i == 0) return 0.0;
  const double up = j + 1 < u.size() ? u[j + 1] : 0.0;
  const double dn = j > 0 ? u[j - 1] : 0.0;
  return (up - dn) / (2.0 * g.dr);
}

double trapezoid_step(double t0, double t1, double a, double b) { return 0.5 * (t1 - t0) * (a + b); }

}  // namespace

FunctionalTrace compute_functionals(const wave::SimOutcome& o, const TestFunctionKit& kit) {
  require_snapshots(o);
  const ModelParams& prm = o.params;
  const SpatialGrid& g = o.grid;
  const std::vector<double> lphi = log_phi_on_grid(g, prm.N);
  FunctionalTrace tr;
  for (const Snapshot& s : o.snapshots) {
    const double lrho = kit.log_rho(s.t);
    double g1 = 0, g2 = 0, f1 = 0, f2 = 0, fp = 0, nlp = 0, nlq = 0;
    for (std::size_t j = 0; j < s.u.size(); ++j) {
      const std::size_t i = s.first + j;
      const double w = g.weight(i);
      const double u = s.u[j];
      const double ut = s.ut(j);
      if (u == 0.0 && ut == 0.0) continue;
      const double psi = std::exp(lrho + lphi[i]);
      const double psi0 = std::exp(-s.t + lphi[i]);
      g1 += w * u * psi;
      g2 += w * ut * psi;
      f1 += w * u * psi0;
      f2 += w * ut * psi0;
      fp += w * u;
      nlp += w * std::pow(std::abs(ut), prm.p) * psi;
      nlq += w * std::pow(std::abs(u), prm.q) * psi;
    }
    tr.t.push_back(s.t);
    tr.G1.push_back(g1);
    tr.G2.push_back(g2);
    tr.F1.push_back(f1);
    tr.F2.push_back(f2);
    tr.Fplain.push_back(fp);
    tr.G.push_back(kit.zeta(s.t) * fp);
    tr.L.push_back(std::sqrt(kit.M_mult(s.t)) * kit.zeta(s.t) * fp);
    tr.NL_p.push_back(nlp);
    tr.NL_q.push_back(nlq);
  }
  return tr;
}

double cross_check_error(const FunctionalTrace& tr, const TestFunctionKit& kit) {
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const double c = std::exp(kit.log_rho(tr.t[k]) + tr.t[k]);
    const double pairs[2][2] = {{tr.G1[k], c * tr.F1[k]}, {tr.G2[k], c * tr.F2[k]}};
    for (const auto& p : pairs) {
      const double scale = std::max(std::abs(p[0]), std::abs(p[1]));
      if (scale > 0.0) worst = std::max(worst, std::abs(p[0] - p[1]) / scale);
    }
  }
  return worst;
}

DataConstants data_constants(const std::vector<double>& f, const std::vector<double>& g, const SpatialGrid& grid,
                             const TestFunctionKit& kit) {
  if (f.size() != static_cast<std::size_t>(grid.n_points) || g.size() != f.size())
    throw std::invalid_argument("data arrays do not match the grid");
  const int N = kit.params().N;
  const double coef = 0.5 * (kit.params().mu - 1.0 - std::sqrt(kit.delta()));
  double a = 0, b = 0, c0 = 0;
  bool nonzero = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0 && g[i] == 0.0) continue;
    nonzero = true;
    const double wphi = grid.weight(i) * testfunc::phi(grid.radius(i), N);
    a += (coef * f[i] + g[i]) * wphi;
    b += g[i] * wphi;
    c0 += (f[i] + g[i]) * wphi;
  }
  DataConstants out;
  out.Cfg = kit.k_at_one() * a + kit.k1_at_one() * b;
  out.C0fg = c0;
  if (nonzero && !(out.Cfg > 0.0))
    throw HypothesisViolation("C(f,g) <= 0: the data violate ((mu-1-sqrt(delta))/2) f + g > 0");
  return out;
}

G1Fit fit_G1(const FunctionalTrace& tr, double eps, double t_lo, double t_hi) {
  G1Fit fit;
  if (eps == 0.0) return fit;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < tr.t.size(); ++k)
    if (tr.t[k] >= t_lo && tr.t[k] <= t_hi) idx.push_back(k);
  if (idx.empty()) return fit;
  fit.c_fit = std::numeric_limits<double>::infinity();
  for (std::size_t k : idx) fit.c_fit = std::min(fit.c_fit, tr.G1[k] / eps);

  const std::size_t tail = std::max<std::size_t>(1, idx.size() / 10);
  std::vector<double> late;
  for (std::size_t j = idx.size() - tail; j < idx.size(); ++j) late.push_back(tr.G1[idx[j]]);
  std::nth_element(late.begin(), late.begin() + late.size() / 2, late.end());
  const double plateau = late[late.size() / 2] / eps;
  fit.T0 = tr.t[idx.back()];
  for (std::size_t k : idx) {
    if (tr.G1[k] / eps >= 0.5 * plateau) {
      fit.T0 = tr.t[k];
      break;
    }
  }
  return fit;
}

G1Check check_G1_coercivity(const std::vector<FunctionalTrace>& traces, const std::vector<double>& eps,
                            double t_lo, double t_hi) {
  if (traces.size() != eps.size()) throw std::invalid_argument("one eps per trace");
  G1Check out;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool positive = !traces.empty();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    out.fits.push_back(fit_G1(traces[i], eps[i], t_lo, t_hi));
    const double c = out.fits.back().c_fit;
    positive = positive && c > 0.0;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  out.spread = positive ? hi / lo : std::numeric_limits<double>::infinity();
  out.pass = positive && out.spread < 2.0;
  return out;
}

G2Check check_G2(const FunctionalTrace& tr, const ModelParams& prm, double eps, double T0) {
  G2Check out;
  if (tr.t.empty()) return out;
  out.min_G2 = *std::min_element(tr.G2.begin(), tr.G2.end());
  out.max_G2 = *std::max_element(tr.G2.begin(), tr.G2.end());
  const double nu2 = prm.nu * prm.nu;
  if (nu2 == 0.0) {
    out.neg_bound_ok = out.min_G2 >= -1e-10 * std::max(std::abs(out.max_G2), 0.0);
    out.K_fit = out.neg_bound_ok ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      if (tr.G2[k] >= 0.0) continue;
      const double t = tr.t[k];
      const double log_extra = (2.0 / (prm.p - 1.0)) * std::log(prm.nu) + prm.p / (prm.p - 1.0) * t +
                               0.5 * (prm.N - 1) * std::log1p(t);
      const double bound = nu2 * (1.0 + std::exp(log_extra));
      out.K_fit = std::max(out.K_fit, -tr.G2[k] / bound);
    }
    out.neg_bound_ok = std::isfinite(out.K_fit);
  }

  if (eps > 0.0) {
    std::size_t start = tr.t.size();
    for (std::size_t k = tr.t.size(); k-- > 0;) {
      if (!(tr.G2[k] > 0.0)) break;
      start = k;
    }
    if (start < tr.t.size()) {
      out.coercive_from = tr.t[start];
      out.c_G2 = std::numeric_limits<double>::infinity();
      for (std::size_t k = start; k < tr.t.size(); ++k) out.c_G2 = std::min(out.c_G2, tr.G2[k] / eps);
    }
  }
  const double limit = 1.2 * std::max(eps > 0.0 ? -std::log(eps) : 0.0, T0);
  out.pass = out.neg_bound_ok && out.coercive_from && *out.coercive_from <= limit;
  return out;
}

InequalityCheck check_L_inequality(const FunctionalTrace& tr, const ModelParams& prm, double T_est) {
  InequalityCheck out;
  out.t_lo = 1.0;
  out.t_hi = std::isfinite(T_est) && T_est > 0.0 ? 0.9 * T_est : tr.t.empty() ? 0.0 : tr.t.back();
  const double delta = prm.delta();
  const double expo = (prm.N + 0.5 * prm.mu) * (prm.q - 1.0);
  bool all_zero = true;
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < tr.t.size(); ++k) {
    const double t = tr.t[k];
    if (t < out.t_lo || t > out.t_hi) continue;
    const double h0 = t - tr.t[k - 1], h1 = tr.t[k + 1] - t;
    const double Lpp = 2.0 * (h0 * tr.L[k + 1] - (h0 + h1) * tr.L[k] + h1 * tr.L[k - 1]) / (h0 * h1 * (h0 + h1));
    const double s = 1.0 + t;
    const double lhs = Lpp + (1.0 - delta) / (4.0 * s * s) * tr.L[k];
    const double rhs = std::pow(std::max(tr.L[k], 0.0), prm.q) / std::pow(s, expo);
    if (tr.L[k] != 0.0) all_zero = false;
    if (rhs == 0.0) continue;
    out.t.push_back(t);
    out.ratio.push_back(lhs / rhs);
    c = std::min(c, lhs / rhs);
  }
  if (all_zero && !tr.t.empty()) {
    out.degenerate = true;
    out.pass = true;
    return out;
  }
  if (out.t.size() < 3) throw std::invalid_argument("trace too short for the L inequality window");
  out.c_fit = c;
  out.pass = c > 0.0;
  return out;
}

InequalityCheck check_H_inequality(const FunctionalTrace& tr, const ModelParams& prm, double eps, double c_G2,
                                   double T_est) {
  InequalityCheck out;
  if (eps <= 0.0) {
    out.degenerate = true;
    return out;
  }
  const double T3 = -std::log(eps);
  out.t_lo = T3;
  out.t_hi = std::isfinite(T_est) && T_est > 0.0 ? 0.9 * T_est : tr.t.empty() ? 0.0 : tr.t.back();
  if (tr.t.empty() || tr.t.back() < T3) throw std::invalid_argument("run does not reach T3 = -ln eps");
  std::size_t k0 = 0;
  while (k0 < tr.t.size() && tr.t[k0] < T3) ++k0;
  // Integrand at T3 by linear interpolation, then trapezoid on the samples.
  double H = c_G2 * eps / 8.0;
  double t_prev = T3;
  double f_prev = tr.NL_p[k0];
  if (k0 > 0) {
    const double w = (T3 - tr.t[k0 - 1]) / (tr.t[k0] - tr.t[k0 - 1]);
    f_prev = (1 - w) * tr.NL_p[k0 - 1] + w * tr.NL_p[k0];
  }
  const double expo = 0.5 * (prm.N + prm.mu - 1.0) * (prm.p - 1.0);
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t k = k0; k < tr.t.size() && tr.t[k] <= out.t_hi; ++k) {
    H += trapezoid_step(t_prev, tr.t[k], f_prev, tr.NL_p[k]) / 8.0;
    t_prev = tr.t[k];
    f_prev = tr.NL_p[k];
    const double Hp = tr.NL_p[k] / 8.0;
    const double rhs = std::pow(H, prm.p) * std::pow(1.0 + tr.t[k], -expo);
    out.t.push_back(tr.t[k]);
    out.ratio.push_back(Hp / rhs);
    c = std::min(c, Hp / rhs);
  }
  if (out.t.empty()) throw std::invalid_argument("empty H window");
  out.c_fit = c;
  out.pass = c_G2 > 0.0 && c > 0.0 && std::isfinite(c);
  return out;
}

WeakFormResult weak_form_residual(const wave::SimOutcome& o, TestChoice choice, const TestFunctionKit* kit,
                                  double t_hi) {
  require_snapshots(o);
  if (choice == TestChoice::psi && kit == nullptr) throw std::invalid_argument("Phi = psi needs a test-function kit");
  const ModelParams& prm = o.params;
  const SpatialGrid& g = o.grid;
  WeakFormResult out;
  std::vector<double> lphi;
  if (choice == TestChoice::psi) lphi = log_phi_on_grid(g, prm.N);

  struct Terms {
    double boundary = 0, ut_phit = 0, grad = 0, damp = 0, mass = 0, nl = 0;
  };
  auto terms = [&](const Snapshot& s) {
    Terms T;
    const double sp = 1.0 + s.t;
    double rho = 1.0, drho = 0.0;
    if (choice == TestChoice::psi) {
      rho = kit->rho(s.t);
      drho = kit->rho_prime(s.t);
    }
    for (std::size_t j = 0; j < s.u.size(); ++j) {
      const std::size_t i = s.first + j;
      const double u = s.u[j];
      const double ut = s.ut(j);
      if (u == 0.0 && ut == 0.0 && (j + 1 >= s.u.size() || s.u[j + 1] == 0.0) && (j == 0 || s.u[j - 1] == 0.0))
        continue;
      const double w = g.weight(i);
      double Phi = 1.0, Phi_t = 0.0, Phi_r = 0.0;
      if (choice == TestChoice::psi) {
        const double ph = std::exp(lphi[i]);
        Phi = rho * ph;
        Phi_t = drho * ph;
        double dphi = testfunc::phi_prime(g.radius(i), prm.N);
        if (g.coord(i) < 0.0) dphi = -dphi;
        Phi_r = rho * dphi;
      }
      T.boundary += w * ut * Phi;
      T.ut_phit += w * ut * Phi_t;
      T.grad += w * grad(g, s.u, s.first, j) * Phi_r;
      T.damp += w * prm.mu / sp * ut * Phi;
      T.mass += w * prm.nu * prm.nu / (sp * sp) * u * Phi;
      T.nl += w * (prm.a * std::pow(std::abs(ut), prm.p) + prm.b * std::pow(std::abs(u), prm.q)) * Phi;
    }
    return T;
  };

  const Terms first = terms(o.snapshots.front());
  Terms prev = first;
  double acc[5] = {0, 0, 0, 0, 0};
  double acc_abs[5] = {0, 0, 0, 0, 0};
  for (std::size_t k = 1; k < o.snapshots.size() && o.snapshots[k].t <= t_hi; ++k) {
    const Terms cur = terms(o.snapshots[k]);
    const double t0 = o.snapshots[k - 1].t, t1 = o.snapshots[k].t;
    const double a[5] = {prev.ut_phit, prev.grad, prev.damp, prev.mass, prev.nl};
    const double b[5] = {cur.ut_phit, cur.grad, cur.damp, cur.mass, cur.nl};
    for (int m = 0; m < 5; ++m) {
      acc[m] += trapezoid_step(t0, t1, a[m], b[m]);
      acc_abs[m] += trapezoid_step(t0, t1, std::abs(a[m]), std::abs(b[m]));
    }
    const double res = cur.boundary - first.boundary - acc[0] + acc[1] + acc[2] + acc[3] - acc[4];
    double scale = std::abs(cur.boundary) + std::abs(first.boundary);
    for (double v : acc_abs) scale += v;
    const double rel = scale > 0.0 ? std::abs(res) / scale : 0.0;
    out.t.push_back(t1);
    out.per_time.push_back(rel);
    out.residual = std::max(out.residual, rel);
    prev = cur;
  }
  return out;
}

double transform_residual(const wave::SimOutcome& o, Transform which) {
  require_snapshots(o);
  const ModelParams& prm = o.params;
  if (prm.a != 0 || prm.b != 0) throw std::invalid_argument("transform residuals need a linear run (a = b = 0)");
  const double delta = prm.delta();
  if (which == Transform::damped_v && delta < 0.0)
    throw exponents::DomainError("DAMPED_V requires delta >= 0");
  const double expo = which == Transform::damped_v ? 0.5 * (prm.mu - 1.0 - std::sqrt(delta)) : 0.5 * prm.mu;
  const SpatialGrid& g = o.grid;
  double worst = 0.0;
  for (const Snapshot& s : o.snapshots) {
    if (s.t == 0.0) continue;  // u^{-1} there is a Taylor extrapolation, not a scheme level
    const double dt = s.dt;
    const double wm = std::pow(1.0 + s.t - dt, expo), w0 = std::pow(1.0 + s.t, expo), wp = std::pow(1.0 + s.t + dt, expo);
    std::vector<double> v(s.u.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = w0 * s.u[j];
    const double sp = 1.0 + s.t;
    double max_res = 0.0, max_scale = 0.0;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
      if (g.geometry == wave::Geometry::line_1d && j == 0) continue;
      const double vm = wm * s.u_prev[j], vp = wp * s.u_next[j];
      const double vtt = (vp - 2.0 * v[j] + vm) / (dt * dt);
      const double lv = lap(g, v, s.first, j);
      double extra;
      if (which == Transform::damped_v) {
        extra = (1.0 + std::sqrt(delta)) / sp * (vp - vm) / (2.0 * dt);
      } else {
        extra = (1.0 - delta) / (4.0 * sp * sp) * v[j];
      }
      max_res = std::max(max_res, std::abs(vtt - lv + extra));
      max_scale = std::max(max_scale, std::abs(vtt) + std::abs(lv) + std::abs(extra));
    }
    if (max_scale > 0.0) worst = std::max(worst, max_res / max_scale);
  }
  return worst;
}

}  // namespace blowuplab::diag
