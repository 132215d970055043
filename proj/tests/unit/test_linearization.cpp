#include "doctest.h"

#include <random>

#include "jbif/error.hpp"
#include "jbif/linearization.hpp"

using namespace jbif;

TEST_CASE("cube integrals") {
  const auto legendre = JacobiParams::parse("0", "0");
  const auto c2 = cube_integral_exact(2, legendre);
  CHECK(c2.ratio * 2 == Rational(4, 35));
  CHECK(c2.value() == doctest::Approx(4.0 / 35.0).epsilon(1e-15));
  CHECK(cube_integral(2, legendre) == doctest::Approx(4.0 / 35.0).epsilon(1e-14));
  CHECK(cube_integral_exact(1, legendre).ratio == 0);

  const auto p10 = JacobiParams::parse("1", "0");
  CHECK(cube_integral_exact(1, p10).ratio * 2 == Rational(2, 5));
  CHECK(cube_integral(1, p10) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("Legendre P_2 squared") {
  const auto table = linearization_coeffs(2, JacobiParams::parse("0", "0"));
  REQUIRE(table.exact_coeffs);
  const std::vector<Rational> want = {Rational(1, 5), 0, Rational(2, 7), 0, Rational(18, 35)};
  CHECK(*table.exact_coeffs == want);
  for (int i = 0; i <= 4; ++i) CHECK(table.coeffs[i] == doctest::Approx(to_double(want[i])).epsilon(1e-14).scale(1.0));
  CHECK(table.h_k == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(table.i3 == doctest::Approx(4.0 / 35.0).epsilon(1e-14));
}

TEST_CASE("expansion reproduces P_k^2") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  for (const auto& p : {JacobiParams(0.7, -0.2), JacobiParams(2.5, 1.0), JacobiParams(-0.3, -0.3)}) {
    for (int k = 1; k <= 9; ++k) {
      const auto table = linearization_coeffs(k, p);
      CHECK_FALSE(table.exact_coeffs);
      for (int n = 0; n < 4; ++n) {
        const double t = pick(rng);
        double sum = 0.0;
        for (int i = 0; i <= 2 * k; ++i) sum += table.coeffs[i] * eval_jacobi(i, p, t);
        const double pk = eval_jacobi(k, p, t);
        const double scale = std::pow(endpoint_value(k, p, Side::plus), 2) + std::pow(endpoint_value(k, p, Side::minus), 2);
        CHECK(std::abs(sum - pk * pk) < 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("sign classification") {
  const auto rep = sign_classification(2, JacobiParams::parse("3/2", "1/2"));
  CHECK(rep.exact);
  CHECK(rep.consistent());
  for (auto c : rep.classes) CHECK(c == SignClass::positive);
  CHECK(rep.cube_sign == SignClass::positive);

  const auto odd = sign_classification(3, JacobiParams::parse("1/2", "1/2"));
  CHECK(odd.cube_sign == SignClass::zero);
  for (int i = 0; i <= 6; ++i) CHECK(odd.classes[i] == (i % 2 ? SignClass::zero : SignClass::positive));

  const auto flt = sign_classification(4, JacobiParams(0.25, 0.25));
  CHECK_FALSE(flt.exact);
  CHECK(flt.consistent());

  CHECK_THROWS_AS(sign_classification(2, JacobiParams(0.0, 1.0)), Error);
  CHECK_FALSE(expected_sign(2, 1, JacobiParams(0.0, 1.0)));
  CHECK(*expected_sign(2, 1, JacobiParams(0.0, 0.0)) == SignClass::zero);
  CHECK(*expected_sign(2, 1, JacobiParams(1.0, 0.0)) == SignClass::positive);
}

TEST_CASE("quartic") {
  const auto q = gasper_quartic(2, Rational(2));
  CHECK(q.expanded_exact(0) == 164);
  CHECK(q.factored_exact(0) == 164);
  CHECK(q.expanded(0.0) == doctest::Approx(164.0));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-200, 200);
  std::uniform_int_distribution<int> den(1, 37);
  for (int k = 2; k <= 10; ++k) {
    for (const Rational& a : {Rational(1, 4), Rational(1), Rational(5, 3), Rational(7, 2)}) {
      const auto g = gasper_quartic(k, a);
      for (int n = 0; n < 5; ++n) {
        const Rational J(num(rng), den(rng));
        CHECK(g.factored_exact(J) == g.expanded_exact(J));
      }
      const auto s = quartic_sign_structure(g);
      CHECK(s.x0 > 0.0);
      CHECK(s.coefficient_sign_changes == 1);
      CHECK(std::abs(g.expanded(s.x0)) < 1e-8 * std::abs(g.expanded(0.0)) * (1 + s.x0 * s.x0 * s.x0 * s.x0));
    }
  }

  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_argument;
  };
  CHECK(code([] { gasper_quartic(1, 2.0); }) == ErrorCode::k_too_small);
  CHECK(code([] { gasper_quartic(3, -0.5); }) == ErrorCode::hypothesis_violation);
  CHECK_THROWS_AS(gasper_quartic(3, 1.0).factored_exact(Rational(1)), Error);
}

TEST_CASE("negative degree") {
  CHECK_THROWS_AS(linearization_coeffs(-1, JacobiParams(0.0, 0.0)), Error);
  CHECK_THROWS_AS(cube_integral(-2, JacobiParams(0.0, 0.0)), Error);
}
