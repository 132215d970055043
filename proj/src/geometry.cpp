#include "jbif/geometry.hpp"

#include <cmath>
#include <limits>

#include "jbif/error.hpp"

namespace jbif {

SphereContext params_from_sphere(int n, int d, int c) {
  if (n < 3) throw Error(ErrorCode::out_of_range, "sphere dimension n must be >= 3");
  if (d != 1 && d != 2 && d != 3 && d != 4 && d != 6) {
    throw Error(ErrorCode::invalid_degree, "d must be one of 1, 2, 3, 4, 6");
  }
  if (c > 0) throw Error(ErrorCode::positive_c, "c must be <= 0 (swap alpha and beta for c > 0)");

  const Rational sum = Rational(n + d - 1, d) - 2;  // alpha + beta
  const Rational half_c(c, 2);                     // beta - alpha
  const Rational alpha = (sum - half_c) / 2;
  const Rational beta = (sum + half_c) / 2;
  if (beta <= -1) throw Error(ErrorCode::non_integrable_weight, "derived beta must exceed -1");
  return SphereContext(n, d, c, JacobiParams(alpha, beta));
}

SphereContext SphereContext::with_focal_dimension(int m) const {
  if (m < 0 || m > n_ - 2) throw Error(ErrorCode::out_of_range, "focal dimension must lie in [0, n-2]");
  SphereContext copy = *this;
  copy.m_focal_ = m;
  return copy;
}

double ExtendedRational::to_double() const {
  return finite ? jbif::to_double(*finite) : std::numeric_limits<double>::infinity();
}

Rational sphere_eigenvalue(int i, const SphereContext& ctx) {
  if (i < 0) throw Error(ErrorCode::out_of_range, "eigenvalue index must be >= 0");
  const long di = static_cast<long>(ctx.d()) * i;
  return Rational(-di * (ctx.n() + di - 1));
}

double consistency_check(int i, const SphereContext& ctx, double q) {
  if (i < 1) throw Error(ErrorCode::out_of_range, "consistency_check needs i >= 1");
  if (!(q > 1.0)) throw Error(ErrorCode::out_of_range, "q must exceed 1");
  const Rational lhs = -sphere_eigenvalue(i, ctx) / Rational(ctx.d() * ctx.d());
  const Rational& al = ctx.params().exact_alpha();
  const Rational& be = ctx.params().exact_beta();
  const Rational rhs = Rational(i) * (Rational(i) + al + be + 1);
  return std::abs(to_double(lhs - rhs));
}

ExtendedRational supercritical_threshold(int n, int m_focal) {
  if (m_focal < 0 || m_focal > n - 2) {
    throw Error(ErrorCode::out_of_range, "focal dimension must lie in [0, n-2]");
  }
  if (m_focal == n - 2) return {};
  return {Rational(n - m_focal + 2, n - m_focal - 2)};
}

Rational bifurcation_value_exact(int k, const JacobiParams& params, const Rational& q) {
  if (q <= 1) throw Error(ErrorCode::out_of_range, "q must exceed 1");
  return Rational(k) * (Rational(k) + params.exact_alpha() + params.exact_beta() + 1) / (q - 1);
}

}  // namespace jbif
