#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blowuplab/exponents.hpp"
#include "blowuplab/wavesolver.hpp"

namespace blowuplab::lifespan {

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of log T against log(1/eps). Needs >= 3 points, T > 0, distinct eps.
PowerFit fit_powerlaw(const std::vector<double>& eps, const std::vector<double>& T);

/// Least squares of log T against x (used with x = eps^{-(p-1)} in the critical case).
PowerFit fit_loglinear(const std::vector<double>& x, const std::vector<double>& T);

enum class Verdict { consistent, bound_violated, inconclusive };
std::string to_string(Verdict v);

/// Exponents above this are not measurable as a slope over a desk-scale eps range.
inline constexpr double kMeasurableExponent = 10.0;

struct SweepPlan {
  ModelParams base;  // eps ignored
  std::vector<double> eps_list;
  std::vector<double> dr_ladder{0.01, 0.005};
  double cfl = 0.45;
  double threshold = 1e8;
  double safety = 3.0;
  double first_horizon = 200.0;
  double max_horizon = 2000.0;
  double tol = 0.25;
  double snapshot_every = 0.0;  // finest rung only, for the outcome hook
};

struct Record {
  double eps = 0.0;
  double T_est = 0.0;
  bool converged = false;
  double grid_dr = 0.0;
  wave::Status status = wave::Status::survived;
  double t_max = 0.0;
  bool retried = false;
  std::vector<double> T_ladder;
};

struct SweepResult {
  std::vector<Record> records;  // sorted by descending eps
  std::optional<PowerFit> fit;
  exponents::LifespanExponent theory;
  double log_C_fit = 0.0;
  Verdict verdict = Verdict::inconclusive;
  bool slope_exceeds_theory = false;
  // Set when the exponent is too steep to measure: every run blew up and T is
  // non-decreasing (2% slack) as eps decreases.
  std::optional<bool> fallback_ok;
  std::string note;
};

/// Called once per eps with the finest-grid outcome (snapshots per plan.snapshot_every).
using OutcomeHook = std::function<void(const Record&, const wave::SimOutcome&)>;

/// Worker count: BLOWUPLAB_THREADS if set, otherwise hardware concurrency.
unsigned worker_count();

/// Verdict and fit from finished records; exposed for re-analysis of subsets.
SweepResult analyze(const ModelParams& base, std::vector<Record> records, double tol);

SweepResult run_sweep(const SweepPlan& plan, const OutcomeHook& hook = {});

}  // namespace blowuplab::lifespan
