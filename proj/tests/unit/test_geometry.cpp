#include "doctest.h"

#include "jbif/error.hpp"
#include "jbif/geometry.hpp"

using namespace jbif;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("sphere data maps to exact Jacobi exponents") {
  const auto s3 = params_from_sphere(3, 1, 0);
  CHECK(s3.params().exact_alpha() == Rational(1, 2));
  CHECK(s3.params().exact_beta() == Rational(1, 2));

  const auto s5 = params_from_sphere(5, 2, 0);
  CHECK(s5.params().exact_alpha() == Rational(1, 2));
  CHECK(s5.params().exact_beta() == Rational(1, 2));

  // beta - alpha = c/2 and alpha + beta + 2 = (n + d - 1)/d
  const auto s = params_from_sphere(5, 2, -2);
  CHECK(s.params().exact_alpha() == 1);
  CHECK(s.params().exact_beta() == 0);

  const auto big = params_from_sphere(31, 4, -6);
  const Rational a = big.params().exact_alpha();
  const Rational b = big.params().exact_beta();
  CHECK(b - a == Rational(-6, 2));
  CHECK(a + b + 2 == Rational(31 + 4 - 1, 4));
}

TEST_CASE("sphere input validation") {
  CHECK(code_of([] { params_from_sphere(3, 5, 0); }) == ErrorCode::invalid_degree);
  CHECK(code_of([] { params_from_sphere(2, 1, 0); }) == ErrorCode::out_of_range);
  CHECK(code_of([] { params_from_sphere(5, 2, 2); }) == ErrorCode::positive_c);
  CHECK(code_of([] { params_from_sphere(3, 1, -6); }) == ErrorCode::non_integrable_weight);
  for (int d : {1, 2, 3, 4, 6}) CHECK_NOTHROW(params_from_sphere(13, d, 0));
}

TEST_CASE("eigenvalues match the Jacobi spectrum") {
  const auto s3 = params_from_sphere(3, 1, 0);
  CHECK(sphere_eigenvalue(0, s3) == 0);
  CHECK(sphere_eigenvalue(1, s3) == -3);
  CHECK(sphere_eigenvalue(2, s3) == -8);
  for (const auto& ctx : {s3, params_from_sphere(5, 2, -2), params_from_sphere(13, 3, 0), params_from_sphere(31, 4, -6)}) {
    for (int i = 1; i <= 8; ++i) CHECK(consistency_check(i, ctx, 2.0) == 0.0);
  }
}

TEST_CASE("supercritical threshold") {
  CHECK(*supercritical_threshold(5, 1).finite == 3);
  CHECK(*supercritical_threshold(10, 2).finite == Rational(10, 6));
  CHECK(supercritical_threshold(7, 5).is_infinite());
  CHECK(std::isinf(supercritical_threshold(7, 5).to_double()));
  const auto s = params_from_sphere(5, 2, -2);
  CHECK_NOTHROW(s.with_focal_dimension(1));
  CHECK_THROWS_AS(s.with_focal_dimension(4), Error);
}

TEST_CASE("bifurcation values") {
  const auto p = params_from_sphere(3, 1, 0).params();
  CHECK(bifurcation_value_exact(1, p, Rational(3)) == Rational(3, 2));
  CHECK(bifurcation_value_exact(2, p, Rational(3)) == 4);
  CHECK(bifurcation_value_exact(1, JacobiParams::parse("1", "0"), Rational(2)) == 3);
}
