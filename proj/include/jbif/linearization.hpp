#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "jbif/jacobi.hpp"

namespace jbif {

/// Expansion P_k^2 = sum_{i=0}^{2k} C_k^i P_i together with h_k and the cube
/// integral I3 = int P_k^3 w.
struct LinearizationTable {
  int k = 0;
  JacobiParams params;
  std::vector<double> coeffs;
  /// Present when params carry an exact mirror.
  std::optional<std::vector<Rational>> exact_coeffs;
  double h_k = 0.0;
  double i3 = 0.0;
  /// I3 / mu0 and h_k / mu0 in exact form, when available.
  std::optional<Rational> i3_ratio;
  std::optional<Rational> h_k_ratio;
};

LinearizationTable linearization_coeffs(int k, const JacobiParams& params);

/// int P_k^3 (1-t)^alpha (1+t)^beta dt.
double cube_integral(int k, const JacobiParams& params);
WeightedIntegral cube_integral_exact(int k, const JacobiParams& params);

enum class SignClass { negative = -1, zero = 0, positive = 1 };
std::string_view to_string(SignClass s);

/// Sign expected for C_k^i under alpha >= beta, alpha + beta + 1 > 0; nullopt outside that range.
std::optional<SignClass> expected_sign(int k, int i, const JacobiParams& params);

struct SignDiscrepancy {
  int index;
  SignClass expected;
  SignClass observed;
};

struct SignReport {
  int k = 0;
  std::vector<SignClass> classes;
  /// true when signs were taken from exact rationals.
  bool exact = false;
  std::vector<SignDiscrepancy> discrepancies;
  /// Disagreements between the float classification and the exact one.
  std::vector<int> float_exact_mismatches;
  SignClass cube_sign = SignClass::zero;

  bool consistent() const { return discrepancies.empty() && float_exact_mismatches.empty(); }
};

/// Classifies each C_k^i and compares with the expected signs; violations are reported, not thrown.
/// Throws hypothesis-violation when alpha < beta or alpha + beta + 1 <= 0.
SignReport sign_classification(int k, const JacobiParams& params);
SignReport sign_classification(const LinearizationTable& table);

/// Q_J from the Gasper recurrence, kept both in factored form and expanded in J.
class GasperQuartic {
 public:
  int k() const noexcept { return k_; }
  double a() const noexcept { return a_; }

  /// Coefficients of J^0 .. J^4.
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  const std::optional<std::vector<Rational>>& exact_coefficients() const noexcept { return exact_; }

  double factored(double J) const;
  double expanded(double J) const;
  Rational factored_exact(const Rational& J) const;
  Rational expanded_exact(const Rational& J) const;

 private:
  friend GasperQuartic gasper_quartic(int k, double a);
  friend GasperQuartic gasper_quartic(int k, const Rational& a);
  GasperQuartic() = default;

  int k_ = 0;
  double a_ = 0.0;
  std::optional<Rational> exact_a_;
  std::vector<double> coeffs_;
  std::optional<std::vector<Rational>> exact_;
};

GasperQuartic gasper_quartic(int k, double a);
GasperQuartic gasper_quartic(int k, const Rational& a);

struct QuarticStructure {
  double x0 = 0.0;
  double q_at_zero = 0.0;
  int coefficient_sign_changes = 0;
};

/// Locates the unique positive root and checks the sign pattern around it.
/// Throws structure-violation if any check fails.
QuarticStructure quartic_sign_structure(const GasperQuartic& gq);

}  // namespace jbif
