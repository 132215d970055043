#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "jbif/rational.hpp"

namespace jbif {

/// Exponents of the weight (1-t)^alpha (1+t)^beta on [-1, 1].
///
/// Constructing from rationals keeps an exact mirror, which enables the exact
/// polynomial paths (exact_coeffs, apply_L, exact integrals). Constructing from
/// doubles gives a float-only parameter set.
class JacobiParams {
 public:
  JacobiParams(double alpha, double beta);
  JacobiParams(const Rational& alpha, const Rational& beta);

  /// Parses each exponent with parse_rational, so "0.3" and "3/2" are exact.
  static JacobiParams parse(std::string_view alpha, std::string_view beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  /// alpha + beta + 1
  double a() const noexcept { return alpha_ + beta_ + 1.0; }
  /// alpha - beta
  double b() const noexcept { return alpha_ - beta_; }

  bool has_exact() const noexcept { return exact_.has_value(); }
  /// Throws irrational-params when no exact mirror is present.
  const Rational& exact_alpha() const;
  const Rational& exact_beta() const;

  /// alpha == beta, decided exactly when possible.
  bool symmetric() const noexcept;
  /// alpha >= beta and alpha + beta + 1 > 0, decided exactly when possible.
  bool gasper_hypotheses() const noexcept;

  bool operator==(const JacobiParams& other) const noexcept {
    return alpha_ == other.alpha_ && beta_ == other.beta_;
  }

 private:
  void validate() const;

  double alpha_;
  double beta_;
  std::optional<std::pair<Rational, Rational>> exact_;
};

enum class Side { minus = -1, plus = +1 };

/// Polynomial with exact rational monomial coefficients; coeffs[j] multiplies t^j.
class ExactPolynomial {
 public:
  ExactPolynomial() = default;
  explicit ExactPolynomial(std::vector<Rational> coeffs);

  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  Rational operator()(const Rational& t) const;
  /// Exact evaluation at the dyadic value of t, rounded once at the end.
  double eval_exact(double t) const;

  ExactPolynomial derivative() const;

  friend ExactPolynomial operator+(const ExactPolynomial& p, const ExactPolynomial& q);
  friend ExactPolynomial operator-(const ExactPolynomial& p, const ExactPolynomial& q);
  friend ExactPolynomial operator*(const ExactPolynomial& p, const ExactPolynomial& q);
  friend ExactPolynomial operator*(const Rational& s, const ExactPolynomial& p);
  friend bool operator==(const ExactPolynomial& p, const ExactPolynomial& q) {
    return p.coeffs_ == q.coeffs_;
  }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Gauss-Jacobi rule: m nodes in (-1, 1), positive weights, exact through degree 2m - 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
  JacobiParams params;
};

/// Weighted integral in exact form: value = ratio * mu0, with mu0 the total weight mass.
struct WeightedIntegral {
  Rational ratio;
  double mu0 = 0.0;
  double value() const { return to_double(ratio) * mu0; }
};

// --- floating-point evaluation (three-term recurrence) ---

double eval_jacobi(int k, const JacobiParams& params, double t);

/// Writes P_0(t) .. P_{out.size()-1}(t).
void eval_jacobi_all(const JacobiParams& params, double t, std::span<double> out);

/// r-th derivative of P_k, through the degree-shift identity.
double eval_jacobi_derivative(int k, const JacobiParams& params, double t, int order = 1);

double endpoint_value(int k, const JacobiParams& params, Side side);
Rational endpoint_value_exact(int k, const JacobiParams& params, Side side);

// --- exact polynomial algebra ---

ExactPolynomial exact_coeffs(int k, const JacobiParams& params);
ExactPolynomial apply_L(const ExactPolynomial& p, const JacobiParams& params);

/// nu_j = (integral of t^j w) / (integral of w), j = 0..jmax, exact.
std::vector<Rational> normalized_moments(const JacobiParams& params, int jmax);
WeightedIntegral exact_weighted_integral(const ExactPolynomial& p, const JacobiParams& params);

// --- quadrature and norms ---

/// Total mass of the weight, 2^(a) B(alpha + 1, beta + 1).
double weight_integral(const JacobiParams& params);

QuadratureRule gauss_jacobi_rule(const JacobiParams& params, int m);
/// Memoized gauss_jacobi_rule; safe to call from several threads.
std::shared_ptr<const QuadratureRule> cached_rule(const JacobiParams& params, int m);

/// Number of points used to integrate a degree-`degree` polynomial: ceil((D+1)/2) + 2.
int default_rule_order(int degree);

/// h_k by quadrature.
double weighted_norm_sq(int k, const JacobiParams& params);
/// h_k from the Gamma-function closed form.
double weighted_norm_sq_closed_form(int k, const JacobiParams& params);

std::vector<double> jacobi_zeros(int k, const JacobiParams& params);

}  // namespace jbif
