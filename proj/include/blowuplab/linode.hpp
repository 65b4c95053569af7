#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace blowuplab::linode {

class StepUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// F1'' + (2 + μ/(1+t)) F1' + (μ/(1+t) + ν²/(1+t)²) F1 = 0 sampled on a uniform grid.
struct OdeTrace {
  std::vector<double> t;
  std::vector<double> F1;
  std::vector<double> F1_prime;
  std::vector<double> F2;  // F1' + F1
  double mu = 0.0;
  double nu = 0.0;
  std::pair<double, double> ic{1.0, 0.0};  // (F1(0), F1'(0))
  int accepted_steps = 0;
  int rejected_steps = 0;
};

inline constexpr int kDefaultGridPoints = 2000;

/// Dormand-Prince 5(4) with dense output onto `grid_points` uniform samples of [0, t_max].
OdeTrace solve_appendix_ode(double mu, double nu, std::pair<double, double> ic, double t_max,
                            double rel_tol, int grid_points = kDefaultGridPoints);

/// Residual of the ODE at grid point i, from a centred difference of F1'.
double ode_residual(const OdeTrace& trace, std::size_t i);

struct SignChanges {
  int count = 0;
  std::vector<double> times;
};

/// Strict alternations of F2, ignoring samples with |F2| < 1e-12 max|F2|.
SignChanges sign_changes(const OdeTrace& trace);
SignChanges sign_changes(const std::vector<double>& t, const std::vector<double>& values);

/// +1, -1 or 0 for the sign of F2 over the last quarter of the trace (0 when mixed).
int final_quarter_sign(const OdeTrace& trace);

struct FigureCase {
  int index = 0;
  double mu = 0.0;
  double nu = 0.0;
};

/// The four reference (μ, ν) pairs.
std::vector<FigureCase> figure_cases();

struct FigureSummary {
  FigureCase fig;
  double delta = 0.0;
  int sign_changes = 0;
  int final_sign = 0;
  OdeTrace trace;
};

/// Runs all four cases concurrently with ic (1,0) and t_max 20.
std::vector<FigureSummary> run_figures(double t_max = 20.0, double rel_tol = 1e-10);

}  // namespace blowuplab::linode
