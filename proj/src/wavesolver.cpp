#include "blowuplab/wavesolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blowuplab::wave {

std::string to_string(Geometry g) { return g == Geometry::line_1d ? "LINE_1D" : "RADIAL"; }

std::string to_string(Status s) {
  switch (s) {
    case Status::blew_up: return "BLEW_UP";
    case Status::survived: return "SURVIVED";
    case Status::unresolved: return "UNRESOLVED";
  }
  return "?";
}

double SpatialGrid::coord(std::size_t i) const {
  return geometry == Geometry::line_1d ? -r_max + static_cast<double>(i) * dr : static_cast<double>(i) * dr;
}

double SpatialGrid::radius(std::size_t i) const { return std::abs(coord(i)); }

std::size_t SpatialGrid::center() const {
  return geometry == Geometry::line_1d ? static_cast<std::size_t>(n_points / 2) : 0;
}

double SpatialGrid::weight(std::size_t i) const {
  if (geometry == Geometry::line_1d) return dr;
  const double r = radius(i);
  const double w = i == 0 ? 0.5 * dr : dr;
  if (N == 1) return 2.0 * w;
  const double omega = 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
  return omega * std::pow(r, N - 1) * w;
}

SpatialGrid make_grid(double dr, double t_max, double R, int N, Geometry geometry) {
  if (!(dr > 0.0)) throw std::invalid_argument("dr must be positive");
  if (geometry == Geometry::line_1d && N != 1) throw std::invalid_argument("LINE_1D requires N = 1");
  SpatialGrid g;
  g.dr = dr;
  g.N = N;
  g.geometry = geometry;
  const long cells = static_cast<long>(std::ceil((t_max + R) / dr)) + kGuardCells + 8;
  g.r_max = cells * dr;
  g.n_points = static_cast<int>(geometry == Geometry::line_1d ? 2 * cells + 1 : cells + 1);
  return g;
}

double bump(double r, double R) {
  const double s = r / R;
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

InitialData make_initial_data(const ModelParams& params, const SpatialGrid& grid, Profile profile) {
  const double delta = params.delta();
  if (delta < 0.0 && (params.a != 0 || params.b != 0))
    throw ParamError("nonlinear runs require delta >= 0");
  InitialData d;
  d.f.resize(grid.n_points);
  d.g.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.coord(i);
    const double f = bump(std::abs(x), params.R);
    d.f[i] = f;
    if (profile == Profile::smooth_bump) {
      d.g[i] = f;
    } else {
      // g = -f' so that u = f(x - t) when the equation is the plain wave equation.
      const double s = x / params.R;
      d.g[i] = f > 0.0 ? f * 2.0 * s / (params.R * (1 - s * s) * (1 - s * s)) : 0.0;
    }
  }
  const double coef = delta >= 0.0 ? 0.5 * (params.mu - 1.0 - std::sqrt(delta)) : 0.0;
  d.certified = delta >= 0.0;
  for (int i = 0; i < grid.n_points && d.certified; ++i)
    if (d.f[i] > 0.0 && !(coef * d.f[i] + d.g[i] > 0.0)) d.certified = false;
  if (!d.certified && (params.a != 0 || params.b != 0))
    throw ParamError("initial data violate ((mu-1-sqrt(delta))/2) f + g > 0 on the support of f");
  return d;
}

double time_step(const ModelParams& params, const SolverConfig& config) {
  double dt = config.cfl * config.dr;
  if (params.mu > 0.0) dt = std::min(dt, 0.05 / params.mu);
  return dt;
}

namespace {

inline double pow_abs(double x, double p) {
  x = std::abs(x);
  if (p == 2.0) return x * x;
  if (p == 1.5) return x * std::sqrt(x);
  if (p == 3.0) return x * x * x;
  return std::pow(x, p);
}

class Stepper {
 public:
  Stepper(const ModelParams& prm, const SpatialGrid& grid, double dt)
      : prm_(prm), grid_(grid), dt_(dt), n_(grid.n_points), line_(grid.geometry == Geometry::line_1d) {
    inv_dr2_ = 1.0 / (grid.dr * grid.dr);
    if (!line_) {
      radial_.assign(n_, 0.0);
      for (std::size_t i = 1; i < n_; ++i) radial_[i] = (grid.N - 1) / (grid.radius(i) * 2.0 * grid.dr);
    }
  }

  double lap(const std::vector<double>& u, std::size_t i) const {
    if (line_) return (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dr2_;
    if (i == 0) return grid_.N * 2.0 * (u[1] - u[0]) * inv_dr2_;
    return (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dr2_ + radial_[i] * (u[i + 1] - u[i - 1]);
  }

  // Active index range [lo, hi] at time t.
  void active(double t, long dod_cells, std::size_t& lo, std::size_t& hi) const {
    const long cone = static_cast<long>(std::ceil((t + prm_.R) / grid_.dr)) + kGuardCells;
    const long reach = std::min(cone, dod_cells);
    const long c = static_cast<long>(grid_.center());
    const long last = static_cast<long>(n_) - 2;
    if (line_) {
      lo = static_cast<std::size_t>(std::max(1L, c - reach));
      hi = static_cast<std::size_t>(std::min(last, c + reach));
    } else {
      lo = 0;
      hi = static_cast<std::size_t>(std::min(last, reach));
    }
  }

  double first_step(const std::vector<double>& u0, const std::vector<double>& v0, std::vector<double>& u1,
                    double sign) const {
    double amax = 0.0;
    const std::size_t lo = line_ ? 1 : 0;
    for (std::size_t i = lo; i + 1 < n_; ++i) {
      const double utt = lap(u0, i) - prm_.mu * v0[i] - prm_.nu * prm_.nu * u0[i] +
                         prm_.a * pow_abs(v0[i], prm_.p) + prm_.b * pow_abs(u0[i], prm_.q);
      u1[i] = u0[i] + sign * dt_ * v0[i] + 0.5 * dt_ * dt_ * utt;
      amax = std::max(amax, std::abs(u1[i]));
    }
    return amax;
  }

  // u_next from (u_prev, u) at time t; returns max |u_next| over the active range.
  double step(const std::vector<double>& up, const std::vector<double>& u, std::vector<double>& un, double t,
              std::size_t lo, std::size_t hi) const {
    const double s = 1.0 + t;
    const double half_c = 0.5 * prm_.mu / s * dt_;
    const double m = prm_.nu * prm_.nu / (s * s);
    const double inv = 1.0 / (1.0 + half_c);
    const double dt2 = dt_ * dt_;
    const double inv_dt = 1.0 / dt_;
    const bool has_a = prm_.a != 0, has_b = prm_.b != 0;
    double amax = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
      double nl = 0.0;
      if (has_a) nl += prm_.a * pow_abs((u[i] - up[i]) * inv_dt, prm_.p);
      if (has_b) nl += prm_.b * pow_abs(u[i], prm_.q);
      const double v = (2.0 * u[i] - up[i] + half_c * up[i] + dt2 * (lap(u, i) - m * u[i] + nl)) * inv;
      un[i] = v;
      const double av = std::abs(v);
      amax = av > amax ? av : (av != av ? av : amax);
    }
    return amax;
  }

 private:
  const ModelParams& prm_;
  const SpatialGrid& grid_;
  double dt_;
  std::size_t n_;
  bool line_;
  double inv_dr2_ = 0.0;
  std::vector<double> radial_;
};

Snapshot take(double t, double dt, const std::vector<double>& a, const std::vector<double>& b,
              const std::vector<double>& c, std::size_t lo, std::size_t hi) {
  Snapshot s;
  s.t = t;
  s.dt = dt;
  s.first = lo == 0 ? 0 : lo - 1;
  const std::size_t end = hi + 2;
  s.u_prev.assign(a.begin() + s.first, a.begin() + end);
  s.u.assign(b.begin() + s.first, b.begin() + end);
  s.u_next.assign(c.begin() + s.first, c.begin() + end);
  return s;
}

void track_support(SimOutcome& out, const std::vector<double>& u, double t, double amax) {
  const SpatialGrid& g = out.grid;
  const double tiny = g.dr * g.dr * amax;
  double edge = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > tiny) {
      edge = std::max(edge, g.radius(i));
      any = true;
    }
  }
  if (!any) return;
  const double excess = (edge - (t + out.params.R)) / g.dr;
  out.support_excess_cells = std::max(out.support_excess_cells, excess);
  if (excess > 2.0) out.support_ok = false;
}

}  // namespace

SimOutcome run(const ModelParams& params, const SolverConfig& config) {
  if (time_step(params, config) < 1e-9) {
    SimOutcome out;
    out.params = params;
    out.config = config;
    out.dt = time_step(params, config);
    out.status = Status::unresolved;
    return out;
  }
  const SpatialGrid grid = make_grid(config.dr, config.t_max, params.R, params.N, config.geometry);
  return run(params, config, make_initial_data(params, grid, config.profile));
}

SimOutcome run(const ModelParams& params, const SolverConfig& config, const InitialData& data) {
  SimOutcome out;
  out.params = params;
  out.config = config;
  out.grid = make_grid(config.dr, config.t_max, params.R, params.N, config.geometry);
  out.data = data;
  const SpatialGrid& grid = out.grid;
  if (data.f.size() != static_cast<std::size_t>(grid.n_points) || data.g.size() != data.f.size())
    throw std::invalid_argument("initial data do not match the grid");
  if (!(config.cfl > 0.0 && config.cfl <= 0.9)) throw std::invalid_argument("cfl must lie in (0, 0.9]");

  const double dt = time_step(params, config);
  out.dt = dt;
  if (dt < 1e-9) {
    out.status = Status::unresolved;
    return out;
  }

  const std::size_t n = grid.n_points;
  std::vector<double> u0(n), v0(n), up(n, 0.0), uc(n, 0.0), un(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    u0[i] = params.eps * data.f[i];
    v0[i] = params.eps * data.g[i];
  }
  const Stepper st(params, grid, dt);
  uc = u0;
  st.first_step(u0, v0, up, -1.0);  // u^{-1}, only for the t = 0 snapshot
  double amax = st.first_step(u0, v0, un, 1.0);

  const long stride = config.snapshot_every > 0.0
                          ? std::max(1L, std::lround(config.snapshot_every / dt))
                          : 0;
  const long support_cells = static_cast<long>(std::ceil(params.R / grid.dr)) + 1;
  std::size_t lo = 0, hi = n - 2;
  st.active(0.0, support_cells + 1, lo, hi);
  if (stride > 0) out.snapshots.push_back(take(0.0, dt, up, uc, un, lo, hi));

  // Shift: (up, uc) = (u^0, u^1).
  up.swap(uc);
  uc.swap(un);
  double t = dt;
  long step = 1;
  double amp0 = 0.0;
  for (double v : u0) amp0 = std::max(amp0, std::abs(v));
  out.history_t.push_back(0.0);
  out.history_amp.push_back(amp0);
  out.history_t.push_back(t);
  out.history_amp.push_back(amax);
  if (config.track_support) track_support(out, uc, t, amax);

  auto finish_blowup = [&](double t_hit, double a_hit) {
    out.status = Status::blew_up;
    const std::size_t k = out.history_t.size();
    double T = t_hit;
    if (k >= 2 && std::isfinite(a_hit)) {
      const double t0 = out.history_t[k - 2], a0 = out.history_amp[k - 2];
      if (a0 > 0.0 && a_hit > a0) {
        const double w = (std::log(config.threshold) - std::log(a0)) / (std::log(a_hit) - std::log(a0));
        T = t0 + std::clamp(w, 0.0, 1.0) * (t_hit - t0);
      }
    } else if (k >= 2) {
      T = out.history_t[k - 2];
    }
    out.T_est = T;
    out.bracket_hi = T;
    out.bracket_lo = 0.0;
    for (std::size_t j = k; j-- > 0;) {
      if (out.history_amp[j] <= config.threshold / 10.0) {
        out.bracket_lo = out.history_t[j];
        break;
      }
    }
  };

  if (!std::isfinite(amax) || amax >= config.threshold) {
    finish_blowup(t, amax);
    out.t_end = t;
    out.steps = step;
    return out;
  }

  while (t < config.t_max - 0.5 * dt) {
    st.active(t, support_cells + step + 1, lo, hi);
    amax = st.step(up, uc, un, t, lo, hi);
    if (stride > 0 && step % stride == 0) out.snapshots.push_back(take(t, dt, up, uc, un, lo, hi));
    up.swap(uc);
    uc.swap(un);
    ++step;
    t = step * dt;
    out.history_t.push_back(t);
    out.history_amp.push_back(amax);
    if (config.track_support && std::isfinite(amax)) track_support(out, uc, t, amax);
    if (!std::isfinite(amax) || amax >= config.threshold) {
      finish_blowup(t, amax);
      break;
    }
  }
  out.t_end = t;
  out.steps = step;
  return out;
}

LifespanEstimate estimate_lifespan(const ModelParams& params, const std::vector<double>& dr_ladder,
                                   const SolverConfig& base, SimOutcome* finest) {
  if (dr_ladder.size() < 2) throw std::invalid_argument("grid ladder needs at least two rungs");
  LifespanEstimate est;
  est.dr = dr_ladder;
  std::sort(est.dr.begin(), est.dr.end(), std::greater<>());
  for (std::size_t k = 0; k < est.dr.size(); ++k) {
    const bool last = k + 1 == est.dr.size();
    SolverConfig cfg = base;
    cfg.dr = est.dr[k];
    if (!last || finest == nullptr) cfg.snapshot_every = 0.0;
    SimOutcome o = run(params, cfg);
    if (last && finest != nullptr) *finest = std::move(o);
    const SimOutcome& res = last && finest != nullptr ? *finest : o;
    if (res.status == Status::unresolved) {
      est.status = Status::unresolved;
      est.T.push_back(std::numeric_limits<double>::quiet_NaN());
      return est;
    }
    est.T.push_back(res.status == Status::blew_up ? res.T_est : std::numeric_limits<double>::quiet_NaN());
    est.status = res.status;
  }
  const double fine = est.T.back();
  const double coarse = est.T[est.T.size() - 2];
  est.T_eps = fine;
  est.converged = est.status == Status::blew_up && std::isfinite(coarse) &&
                  std::abs(fine - coarse) < 0.05 * fine;
  return est;
}

}  // namespace blowuplab::wave
