#pragma once

#include <optional>

#include "jbif/jacobi.hpp"
#include "jbif/rational.hpp"

namespace jbif {

/// Isoparametric data on S^n reduced to the interval problem.
///
/// Holds the sphere dimension n, the degree d of the Cartan-Muenzner
/// polynomial, c = m2 - m1 (normalized to c <= 0) and, optionally, the
/// minimal focal-set dimension. The Jacobi exponents solve
///   beta - alpha = c / 2,  alpha + beta + 2 = (n + d - 1) / d
/// exactly.
class SphereContext {
 public:
  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  int c() const noexcept { return c_; }
  const std::optional<int>& m_focal() const noexcept { return m_focal_; }
  const JacobiParams& params() const noexcept { return params_; }

  /// Returns a copy with the focal dimension attached; validates 0 <= m <= n - 2.
  SphereContext with_focal_dimension(int m) const;

 private:
  friend SphereContext params_from_sphere(int n, int d, int c);
  SphereContext(int n, int d, int c, JacobiParams params)
      : n_(n), d_(d), c_(c), params_(std::move(params)) {}

  int n_;
  int d_;
  int c_;
  std::optional<int> m_focal_;
  JacobiParams params_;
};

/// Value that is either a finite rational or +infinity.
struct ExtendedRational {
  std::optional<Rational> finite;  // nullopt means +infinity

  bool is_infinite() const noexcept { return !finite.has_value(); }
  double to_double() const;
};

SphereContext params_from_sphere(int n, int d, int c);

/// mu_{di} = -d i (n + d i - 1), the Laplace eigenvalue on f-invariant functions.
Rational sphere_eigenvalue(int i, const SphereContext& ctx);

/// | -mu_{di}/d^2 - i (i + alpha + beta + 1) |, evaluated exactly then converted.
double consistency_check(int i, const SphereContext& ctx, double q);

/// q_f = (n - m + 2) / (n - m - 2), infinite when m = n - 2.
ExtendedRational supercritical_threshold(int n, int m_focal);

/// lambda_k = k (k + alpha + beta + 1) / (q - 1) in exact arithmetic.
Rational bifurcation_value_exact(int k, const JacobiParams& params, const Rational& q);

}  // namespace jbif
