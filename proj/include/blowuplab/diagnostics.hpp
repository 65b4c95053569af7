#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowuplab/testfunc.hpp"
#include "blowuplab/wavesolver.hpp"

namespace blowuplab::diag {

class MissingSnapshots : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spatial integrals of the solution along the snapshot times.
struct FunctionalTrace {
  std::vector<double> t;
  std::vector<double> G1, G2;  // against psi
  std::vector<double> F1, F2;  // against psi0
  std::vector<double> Fplain;  // plain integral of u
  std::vector<double> G;       // zeta F
  std::vector<double> L;       // sqrt(M) G
  std::vector<double> NL_p;    // integral of |u_t|^p psi
  std::vector<double> NL_q;    // integral of |u|^q psi
};

FunctionalTrace compute_functionals(const wave::SimOutcome& outcome, const testfunc::TestFunctionKit& kit);

/// Largest relative mismatch of G1 = rho e^t F1 and G2 = rho e^t F2.
double cross_check_error(const FunctionalTrace& trace, const testfunc::TestFunctionKit& kit);

struct DataConstants {
  double Cfg = 0.0;
  double C0fg = 0.0;
};

/// Throws HypothesisViolation when Cfg <= 0 for nonzero data.
DataConstants data_constants(const std::vector<double>& f, const std::vector<double>& g,
                             const wave::SpatialGrid& grid, const testfunc::TestFunctionKit& kit);

struct G1Fit {
  double c_fit = 0.0;  // min of G1/eps over the window
  double T0 = 0.0;     // first time G1/eps reaches half its late-time level
};

G1Fit fit_G1(const FunctionalTrace& trace, double eps, double t_lo, double t_hi);

struct G1Check {
  std::vector<G1Fit> fits;
  double spread = 0.0;  // max c_fit / min c_fit
  bool pass = false;
};

/// Coercivity across runs that differ only in eps: every c_fit > 0 and spread < 2.
G1Check check_G1_coercivity(const std::vector<FunctionalTrace>& traces, const std::vector<double>& eps,
                            double t_lo, double t_hi);

struct G2Check {
  double min_G2 = 0.0;
  double max_G2 = 0.0;
  double K_fit = 0.0;
  bool neg_bound_ok = false;
  std::optional<double> coercive_from;
  double c_G2 = 0.0;  // min G2/eps from coercive_from on
  bool pass = false;
};

G2Check check_G2(const FunctionalTrace& trace, const ModelParams& params, double eps, double T0 = 0.0);

struct InequalityCheck {
  double c_fit = 0.0;
  bool pass = false;
  bool degenerate = false;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<double> t;
  std::vector<double> ratio;  // left side over the right side without its constant
};

/// L'' + (1-delta)/(4(1+t)^2) L >= C L^q (1+t)^{-(N+mu/2)(q-1)} on [1, 0.9 T_est].
InequalityCheck check_L_inequality(const FunctionalTrace& trace, const ModelParams& params, double T_est);

/// H' >= C H^p (1+t)^{-(N+mu-1)(p-1)/2} on [-ln eps, 0.9 T_est], H(T3) = c_G2 eps / 8.
InequalityCheck check_H_inequality(const FunctionalTrace& trace, const ModelParams& params, double eps,
                                   double c_G2, double T_est);

enum class TestChoice { psi, one };

struct WeakFormResult {
  double residual = 0.0;  // max over snapshot times
  std::vector<double> t;
  std::vector<double> per_time;
};

/// Relative residual of the weak identity with Phi = psi or Phi = 1, restricted to t <= t_hi.
WeakFormResult weak_form_residual(const wave::SimOutcome& outcome, TestChoice choice,
                                  const testfunc::TestFunctionKit* kit = nullptr, double t_hi = 1e300);

enum class Transform { damped_v, liouville_w };

/// Max relative residual of the transformed linear equation on the stored time levels.
double transform_residual(const wave::SimOutcome& linear_outcome, Transform which);

}  // namespace blowuplab::diag
