#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace blowuplab {

/// One instance of u_tt - Δu + μ/(1+t) u_t + ν²/(1+t)² u = a|u_t|^p + b|u|^q
/// with data (ε f, ε g) supported in the ball of radius R.
struct ModelParams {
  double mu = 2.0;
  double nu = 0.0;
  double p = 2.0;
  double q = 2.0;
  int N = 1;
  double R = 1.0;
  int a = 1;
  int b = 0;
  double eps = 0.1;

  double delta() const;
};

/// A parameter set that violates one of the model's standing hypotheses.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ParamError naming the violated hypothesis.
void validate(const ModelParams& params);

namespace exponents {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Region {
  combined_blowup,         // |u_t|^p + |u|^q, p > p_G, q > q_S, λ < 4
  derivative_subcritical,  // |u_t|^p, 1 < p < p_G
  derivative_critical,     // |u_t|^p, p = p_G
  outside_scope,
};

std::string to_string(Region region);

struct LifespanExponent {
  enum class Kind { power, exponential, none };
  Kind kind = Kind::none;
  double value = 0.0;  // T ~ eps^-value for power; T ~ exp(C eps^-value) for exponential
};

struct ExponentReport {
  double delta = 0.0;
  std::optional<double> alpha;
  std::optional<double> sigma;
  double p_glassey_shifted = 0.0;  // p_G(N + mu)
  double q_strauss_shifted = 0.0;  // q_S(N + mu)
  double q_fujita = 0.0;           // q_F(N)
  double lambda_shifted = 0.0;     // lambda(p, q, N + mu)
  Region region = Region::outside_scope;
  LifespanExponent lifespan;
  std::string note;
};

/// Tolerance for detecting p == p_G(N + mu).
inline constexpr double kCriticalTolerance = 1e-12;

double delta(double mu, double nu);
double alpha(double mu, double nu);
double p_glassey(double d);
double q_strauss(double d);
double q_fujita(double d);
double lambda(double p, double q, double d);
double sigma(double mu, double nu);

ExponentReport classify(const ModelParams& params);

}  // namespace exponents
}  // namespace blowuplab
