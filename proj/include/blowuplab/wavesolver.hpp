#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowuplab/exponents.hpp"

namespace blowuplab::wave {

enum class Geometry { line_1d, radial };
std::string to_string(Geometry g);

/// Uniform grid: x in [-r_max, r_max] for line_1d, r in [0, r_max] for radial.
struct SpatialGrid {
  double dr = 0.005;
  double r_max = 0.0;
  int n_points = 0;
  Geometry geometry = Geometry::radial;
  int N = 1;

  double coord(std::size_t i) const;
  double radius(std::size_t i) const;
  /// Index of x = 0.
  std::size_t center() const;
  /// Trapezoid weight for integrating a radial function over R^N.
  double weight(std::size_t i) const;
};

/// Guard band (cells) kept active beyond the light cone.
inline constexpr int kGuardCells = 64;

SpatialGrid make_grid(double dr, double t_max, double R, int N, Geometry geometry);

enum class Profile { smooth_bump, right_moving_bump };

struct InitialData {
  std::vector<double> f;  // unscaled; the solver multiplies by eps
  std::vector<double> g;
  bool certified = false;  // ((mu-1-sqrt(delta))/2) f + g > 0 on supp f
};

/// exp(1 - 1/(1-(r/R)^2)) on r < R.
double bump(double r, double R);

/// Throws ParamError when a nonlinear run (a or b nonzero) lacks the positivity certificate.
InitialData make_initial_data(const ModelParams& params, const SpatialGrid& grid,
                              Profile profile = Profile::smooth_bump);

/// Three consecutive time levels around t, restricted to [first, first + u.size()).
struct Snapshot {
  double t = 0.0;
  double dt = 0.0;
  std::size_t first = 0;
  std::vector<double> u_prev, u, u_next;

  double ut(std::size_t j) const { return (u_next[j] - u_prev[j]) / (2.0 * dt); }
};

enum class Status { blew_up, survived, unresolved };
std::string to_string(Status s);

struct SolverConfig {
  double dr = 0.005;
  double cfl = 0.45;
  double t_max = 20.0;
  double threshold = 1e8;
  Geometry geometry = Geometry::radial;
  Profile profile = Profile::smooth_bump;
  double snapshot_every = 0.0;  // time units; 0 disables snapshots
  bool track_support = false;
};

struct SimOutcome {
  Status status = Status::survived;
  double T_est = 0.0;  // threshold crossing time when blew_up
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  long steps = 0;
  std::vector<double> history_t;
  std::vector<double> history_amp;  // max |u| per step
  std::vector<Snapshot> snapshots;
  ModelParams params;
  SpatialGrid grid;
  SolverConfig config;
  InitialData data;
  // Support tracking: largest (edge - (t + R)) / dr seen, edge = outermost |u| > dr^2 max|u|.
  double support_excess_cells = -1e300;
  bool support_ok = true;
};

/// Fixed step min(cfl dr, 0.05/mu).
double time_step(const ModelParams& params, const SolverConfig& config);

/// Leapfrog with centred implicit damping and lagged |u_t|^p, until t_max or max|u| >= threshold.
SimOutcome run(const ModelParams& params, const SolverConfig& config);
SimOutcome run(const ModelParams& params, const SolverConfig& config, const InitialData& data);

struct LifespanEstimate {
  Status status = Status::survived;
  double T_eps = 0.0;
  bool converged = false;
  std::vector<double> dr;
  std::vector<double> T;  // per ladder rung, NaN when the rung did not blow up
};

/// Runs coarse to fine; converged when the two finest T_est agree within 5%.
/// Snapshots are taken on the finest rung only, which is handed back through `finest` when given.
LifespanEstimate estimate_lifespan(const ModelParams& params, const std::vector<double>& dr_ladder,
                                   const SolverConfig& base, SimOutcome* finest = nullptr);

}  // namespace blowuplab::wave
