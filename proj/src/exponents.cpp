#include "blowuplab/exponents.hpp"

#include <cmath>
#include <sstream>

namespace blowuplab {

double ModelParams::delta() const { return exponents::delta(mu, nu); }

void validate(const ModelParams& prm) {
  auto fail = [](const std::string& what) { throw ParamError(what); };
  if (!(prm.mu >= 0.0)) fail("mu >= 0 required (nonnegative damping)");
  if (!(prm.nu >= 0.0)) fail("nu >= 0 required (nonnegative mass coefficient)");
  if (!(prm.p > 1.0)) fail("p > 1 required (hypothesis p, q > 1)");
  if (!(prm.q > 1.0)) fail("q > 1 required (hypothesis p, q > 1)");
  if (prm.N < 1) fail("N >= 1 required (space dimension)");
  if (prm.N >= 3 && prm.q > 2.0 * prm.N / (prm.N - 2.0)) {
    std::ostringstream os;
    os << "q <= 2N/(N-2) = " << 2.0 * prm.N / (prm.N - 2.0)
       << " required for N >= 3 (energy-subcritical power hypothesis)";
    fail(os.str());
  }
  if (!(prm.R > 0.0)) fail("R > 0 required (data supported in a ball of radius R)");
  if (prm.a != 0 && prm.a != 1) fail("a must be 0 or 1");
  if (prm.b != 0 && prm.b != 1) fail("b must be 0 or 1");
  if (!(prm.eps >= 0.0) || !std::isfinite(prm.eps)) fail("eps >= 0 required (data amplitude)");
}

namespace exponents {

std::string to_string(Region region) {
  switch (region) {
    case Region::combined_blowup: return "COMBINED_BLOWUP_THM21";
    case Region::derivative_subcritical: return "DERIVATIVE_BLOWUP_THM22_SUB";
    case Region::derivative_critical: return "DERIVATIVE_BLOWUP_THM22_CRITICAL";
    case Region::outside_scope: return "OUTSIDE_SCOPE";
  }
  return "OUTSIDE_SCOPE";
}

double delta(double mu, double nu) { return (mu - 1.0) * (mu - 1.0) - 4.0 * nu * nu; }

double alpha(double mu, double nu) {
  const double d = delta(mu, nu);
  if (d < 0.0) throw DomainError("alpha: undefined for delta < 0");
  return 0.5 * (mu - 1.0 - std::sqrt(d));
}

double p_glassey(double d) {
  if (!(d > 1.0)) throw DomainError("p_glassey: dimension must be > 1");
  return 1.0 + 2.0 / (d - 1.0);
}

double q_strauss(double d) {
  if (!(d > 1.0)) throw DomainError("q_strauss: dimension must be > 1");
  // Positive root of (d-1) q^2 - (d+1) q - 2 = 0.
  return (d + 1.0 + std::sqrt(d * d + 10.0 * d - 7.0)) / (2.0 * (d - 1.0));
}

double q_fujita(double d) {
  if (!(d > 0.0)) throw DomainError("q_fujita: dimension must be > 0");
  return 1.0 + 2.0 / d;
}

double lambda(double p, double q, double d) { return (q - 1.0) * ((d - 1.0) * p - 2.0); }

double sigma(double mu, double nu) {
  const double d = delta(mu, nu);
  if (d < 0.0) throw DomainError("sigma: undefined for delta < 0");
  return d < 1.0 ? mu + 1.0 - std::sqrt(d) : mu;
}

ExponentReport classify(const ModelParams& prm) {
  validate(prm);
  ExponentReport rep;
  const double d_eff = prm.N + prm.mu;
  rep.delta = delta(prm.mu, prm.nu);
  if (rep.delta >= 0.0) {
    rep.alpha = alpha(prm.mu, prm.nu);
    rep.sigma = sigma(prm.mu, prm.nu);
  }
  rep.q_fujita = q_fujita(prm.N);
  rep.lambda_shifted = lambda(prm.p, prm.q, d_eff);
  // N + mu > 1 except for the damping-free line, where both exponents are infinite.
  if (d_eff > 1.0) {
    rep.p_glassey_shifted = p_glassey(d_eff);
    rep.q_strauss_shifted = q_strauss(d_eff);
  } else {
    rep.p_glassey_shifted = INFINITY;
    rep.q_strauss_shifted = INFINITY;
  }

  if (rep.delta >= (prm.N + 1.0) * (prm.N + 1.0)) {
    rep.note = "delta >= (N+1)^2: heat-like regime, shifted Fujita exponent expected critical";
  }

  if (rep.delta < 0.0) {
    rep.region = Region::outside_scope;
    rep.note = "delta < 0: Klein-Gordon-like regime, no blow-up theorem attached";
    return rep;
  }

  const double pg = rep.p_glassey_shifted;
  const bool derivative_term = prm.a == 1;
  if (derivative_term && std::abs(prm.p - pg) <= kCriticalTolerance) {
    rep.region = Region::derivative_critical;
    rep.lifespan = {LifespanExponent::Kind::exponential, prm.p - 1.0};
  } else if (derivative_term && prm.p < pg) {
    rep.region = Region::derivative_subcritical;
    const double denom = 2.0 - (d_eff - 1.0) * (prm.p - 1.0);
    rep.lifespan = {LifespanExponent::Kind::power, 2.0 * (prm.p - 1.0) / denom};
  } else if (prm.a == 1 && prm.b == 1 && prm.p > pg && prm.q > rep.q_strauss_shifted &&
             rep.lambda_shifted < 4.0) {
    rep.region = Region::combined_blowup;
    rep.lifespan = {LifespanExponent::Kind::power,
                    2.0 * prm.p * (prm.q - 1.0) / (4.0 - rep.lambda_shifted)};
  } else {
    rep.region = Region::outside_scope;
  }
  return rep;
}

}  // namespace exponents
}  // namespace blowuplab
