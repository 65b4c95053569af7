#include "blowuplab/linode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <string>

namespace blowuplab::linode {

namespace {

using Vec = std::array<double, 2>;

struct Rhs {
  double mu;
  double nu2;
  Vec operator()(double t, const Vec& y) const {
    const double s = 1.0 + t;
    return {y[1], -(2.0 + mu / s) * y[1] - (mu / s + nu2 / (s * s)) * y[0]};
  }
};

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Hairer's continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [c, k] : terms)
    for (int i = 0; i < 2; ++i) out[i] += h * c * (*k)[i];
  return out;
}

}  // namespace

OdeTrace solve_appendix_ode(double mu, double nu, std::pair<double, double> ic, double t_max,
                            double rel_tol, int grid_points) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (!(rel_tol >= 1e-12 && rel_tol <= 1e-4)) throw std::invalid_argument("rel_tol must lie in [1e-12, 1e-4]");
  if (grid_points < 2) throw std::invalid_argument("need at least two grid points");

  OdeTrace tr;
  tr.mu = mu;
  tr.nu = nu;
  tr.ic = ic;
  tr.t.resize(grid_points);
  tr.F1.resize(grid_points);
  tr.F1_prime.resize(grid_points);
  tr.F2.resize(grid_points);
  for (int i = 0; i < grid_points; ++i) tr.t[i] = t_max * i / (grid_points - 1);

  const Rhs f{mu, nu * nu};
  const double atol = rel_tol * 1e-6 * std::max(std::abs(ic.first), std::abs(ic.second));
  Vec y{ic.first, ic.second};
  double t = 0.0;
  Vec k1 = f(t, y);
  double h = std::min(1e-3, t_max / 10);
  std::size_t next = 0;
  auto emit = [&](std::size_t i, const Vec& v) {
    tr.F1[i] = v[0];
    tr.F1_prime[i] = v[1];
    tr.F2[i] = v[1] + v[0];
  };
  emit(next++, y);

  while (next < tr.t.size()) {
    if (h < 1e-14 * std::max(1.0, t))
      throw StepUnderflow("step size underflow at t=" + std::to_string(t));
    h = std::min(h, t_max - t);
    const Vec k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const Vec k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const Vec k4 = f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec k5 = f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec k6 = f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const Vec k7 = f(t + h, y1);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = atol + rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err = std::max(err, std::abs(e) / sc);
    }

    if (err <= 1.0) {
      const double t1 = t + h;
      while (next < tr.t.size() && tr.t[next] <= t1 + 1e-12 * t_max) {
        const double th = std::clamp((tr.t[next] - t) / h, 0.0, 1.0);
        const double th1 = 1.0 - th;
        Vec v;
        for (int i = 0; i < 2; ++i) {
          const double dy = y1[i] - y[i];
          const double bspl = h * k1[i] - dy;
          const double r4 = dy - h * k7[i] - bspl;
          const double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
          v[i] = y[i] + th * (dy + th1 * (bspl + th * (r4 + th1 * r5)));
        }
        emit(next++, v);
      }
      t = t1;
      y = y1;
      k1 = k7;
      ++tr.accepted_steps;
    } else {
      ++tr.rejected_steps;
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= err <= 1.0 ? fac : std::min(fac, 1.0);
  }
  return tr;
}

double ode_residual(const OdeTrace& tr, std::size_t i) {
  const std::size_t n = tr.t.size();
  if (n < 5) return 0.0;
  i = std::clamp<std::size_t>(i, 2, n - 3);
  const double h = tr.t[i + 1] - tr.t[i];
  const auto& g = tr.F1_prime;
  const double f1pp = (-g[i + 2] + 8 * g[i + 1] - 8 * g[i - 1] + g[i - 2]) / (12 * h);
  const double s = 1.0 + tr.t[i];
  const double c1 = 2.0 + tr.mu / s;
  const double c0 = tr.mu / s + tr.nu * tr.nu / (s * s);
  const double scale = std::abs(f1pp) + std::abs(c1 * g[i]) + std::abs(c0 * tr.F1[i]);
  const double r = f1pp + c1 * g[i] + c0 * tr.F1[i];
  return scale == 0.0 ? 0.0 : std::abs(r) / scale;
}

SignChanges sign_changes(const std::vector<double>& t, const std::vector<double>& values) {
  SignChanges out;
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  const double band = 1e-12 * peak;
  int last = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) < band || values[i] == 0.0) continue;
    const int s = values[i] > 0.0 ? 1 : -1;
    if (last != 0 && s != last) {
      ++out.count;
      out.times.push_back(t[i]);
    }
    last = s;
  }
  return out;
}

SignChanges sign_changes(const OdeTrace& trace) { return sign_changes(trace.t, trace.F2); }

int final_quarter_sign(const OdeTrace& tr) {
  const std::size_t n = tr.F2.size();
  bool pos = true, neg = true;
  for (std::size_t i = n - n / 4; i < n; ++i) {
    pos = pos && tr.F2[i] > 0.0;
    neg = neg && tr.F2[i] < 0.0;
  }
  return pos ? 1 : (neg ? -1 : 0);
}

std::vector<FigureCase> figure_cases() { return {{1, 10.0, 0.0}, {2, 10.0, 4.0}, {3, 9.0, 4.0}, {4, 10.0, 20.0}}; }

std::vector<FigureSummary> run_figures(double t_max, double rel_tol) {
  std::vector<std::future<FigureSummary>> jobs;
  for (const FigureCase& fc : figure_cases()) {
    jobs.push_back(std::async(std::launch::async, [=] {
      FigureSummary s;
      s.fig = fc;
      s.delta = (fc.mu - 1) * (fc.mu - 1) - 4 * fc.nu * fc.nu;
      s.trace = solve_appendix_ode(fc.mu, fc.nu, {1.0, 0.0}, t_max, rel_tol);
      s.sign_changes = sign_changes(s.trace).count;
      s.final_sign = final_quarter_sign(s.trace);
      return s;
    }));
  }
  std::vector<FigureSummary> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace blowuplab::linode
