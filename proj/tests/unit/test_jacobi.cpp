#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "jbif/error.hpp"
#include "jbif/jacobi.hpp"

using namespace jbif;

namespace {

std::vector<JacobiParams> grid() {
  return {JacobiParams::parse("0", "0"), JacobiParams::parse("1/2", "1/2"), JacobiParams::parse("1", "0"),
          JacobiParams::parse("3/2", "1/2"), JacobiParams::parse("-0.4", "-0.4"), JacobiParams::parse("0.3", "-0.7"),
          JacobiParams::parse("-1/2", "2")};
}

Rational pochhammer(const Rational& x, int k) {
  Rational r = 1;
  for (int j = 0; j < k; ++j) r *= x + j;
  return r;
}

Rational factorial(int k) { return pochhammer(Rational(1), k); }

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(*parse_rational("0.3") == Rational(3, 10));
  CHECK(*parse_rational("-7/2") == Rational(-7, 2));
  CHECK(*parse_rational("1.5e-2") == Rational(3, 200));
  CHECK(*parse_rational("12") == 12);
  CHECK_FALSE(parse_rational("abc"));
  CHECK_FALSE(parse_rational("1/0"));
  CHECK_FALSE(parse_rational(""));
  CHECK(to_double(exact_from_double(0.1)) == 0.1);
  CHECK(exact_from_double(0.1) != Rational(1, 10));
  CHECK(to_string(Rational(-6, 4)) == "-3/2");
}

TEST_CASE("weight must be integrable") {
  CHECK_THROWS_AS(JacobiParams(-1.0, 0.0), Error);
  CHECK_THROWS_AS(JacobiParams(0.0, -1.5), Error);
  CHECK_NOTHROW(JacobiParams(-0.99, -0.99));
  CHECK_THROWS_AS(JacobiParams(0.5, 0.5).exact_alpha(), Error);
}

TEST_CASE("low-degree polynomials") {
  const auto p = JacobiParams::parse("1", "0");
  const auto p1 = exact_coeffs(1, p);
  REQUIRE(p1.coeffs().size() == 2);
  CHECK(p1.coeffs()[0] == Rational(1, 2));
  CHECK(p1.coeffs()[1] == Rational(3, 2));

  const ExactPolynomial t({Rational(0), Rational(1)});
  const auto lt = apply_L(t, p);
  REQUIRE(lt.coeffs().size() == 2);
  CHECK(lt.coeffs()[0] == -1);
  CHECK(lt.coeffs()[1] == -3);

  const auto legendre = JacobiParams(0.0, 0.0);
  CHECK(eval_jacobi(2, legendre, 0.3) == doctest::Approx(-0.365).epsilon(1e-15));
  CHECK(eval_jacobi(3, legendre, 0.5) == doctest::Approx(-0.4375).epsilon(1e-15));
}

TEST_CASE("L P_k = -k(k+a) P_k exactly") {
  for (const auto& p : grid()) {
    for (int k = 0; k <= 10; ++k) {
      const auto pk = exact_coeffs(k, p);
      const Rational eig = -Rational(k) * (k + p.exact_alpha() + p.exact_beta() + 1);
      CHECK(apply_L(pk, p) == eig * pk);
    }
  }
}

TEST_CASE("recurrence agrees with exact coefficients") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  for (const auto& p : grid()) {
    for (int k = 0; k <= 20; ++k) {
      const auto pk = exact_coeffs(k, p);
      const double sup = std::max(std::abs(endpoint_value(k, p, Side::plus)), std::abs(endpoint_value(k, p, Side::minus)));
      for (int n = 0; n < 5; ++n) {
        const double t = pick(rng);
        CHECK(std::abs(eval_jacobi(k, p, t) - pk.eval_exact(t)) <= 1e-13 * sup);
      }
    }
  }
}

TEST_CASE("derivatives") {
  for (const auto& p : grid()) {
    for (int k = 0; k <= 8; ++k) {
      auto d = exact_coeffs(k, p);
      for (int r = 1; r <= 3; ++r) {
        d = d.derivative();
        for (double t : {-0.9, -0.2, 0.4, 0.95}) {
          const double want = d.eval_exact(t);
          CHECK(eval_jacobi_derivative(k, p, t, r) == doctest::Approx(want).epsilon(1e-12).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("endpoint values") {
  for (const auto& p : grid()) {
    for (int k = 0; k <= 15; ++k) {
      const Rational plus = pochhammer(p.exact_alpha() + 1, k) / factorial(k);
      const Rational minus = (k % 2 ? -1 : 1) * pochhammer(p.exact_beta() + 1, k) / factorial(k);
      CHECK(endpoint_value_exact(k, p, Side::plus) == plus);
      CHECK(endpoint_value_exact(k, p, Side::minus) == minus);
      CHECK(exact_coeffs(k, p)(Rational(1)) == plus);
      CHECK(exact_coeffs(k, p)(Rational(-1)) == minus);
    }
  }
}

TEST_CASE("moments and weight mass") {
  const auto legendre = JacobiParams::parse("0", "0");
  const auto nu = normalized_moments(legendre, 6);
  CHECK(nu[0] == 1);
  CHECK(nu[1] == 0);
  CHECK(nu[2] == Rational(1, 3));
  CHECK(nu[4] == Rational(1, 5));
  CHECK(nu[5] == 0);
  CHECK(weight_integral(legendre) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(weight_integral(JacobiParams(1.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(weight_integral(JacobiParams(0.5, 0.5)) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));

  // (1 - t) weight: integral of t^j (1 - t) over the moment of 1
  const auto nu10 = normalized_moments(JacobiParams::parse("1", "0"), 4);
  CHECK(nu10[1] == Rational(-1, 3));
  CHECK(nu10[2] == Rational(1, 3));
  CHECK(nu10[3] == Rational(-1, 5));
}

TEST_CASE("Gauss-Jacobi rules") {
  const auto r = gauss_jacobi_rule(JacobiParams(0.0, 0.0), 3);
  REQUIRE(r.nodes.size() == 3);
  CHECK(r.nodes[0] == doctest::Approx(-std::sqrt(0.6)).epsilon(1e-15));
  CHECK(std::abs(r.nodes[1]) < 1e-15);
  CHECK(r.weights[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));

  for (const auto& p : grid()) {
    const auto rule = gauss_jacobi_rule(p, 40);
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) CHECK(rule.nodes[i - 1] < rule.nodes[i]);
    double mass = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      mass += w;
    }
    CHECK(mass == doctest::Approx(weight_integral(p)).epsilon(1e-13));
  }
  CHECK(cached_rule(JacobiParams(0.5, 0.5), 20) == cached_rule(JacobiParams(0.5, 0.5), 20));
  CHECK(default_rule_order(4) == 5);
  CHECK(default_rule_order(5) == 5);
}

TEST_CASE("norms") {
  for (int k = 0; k <= 20; ++k) {
    CHECK(weighted_norm_sq_closed_form(k, JacobiParams(0.0, 0.0)) == doctest::Approx(2.0 / (2 * k + 1)).epsilon(1e-14));
  }
  CHECK(weighted_norm_sq(1, JacobiParams(1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  for (const auto& p : grid()) {
    for (int k = 0; k <= 20; ++k) {
      CHECK(weighted_norm_sq(k, p) == doctest::Approx(weighted_norm_sq_closed_form(k, p)).epsilon(1e-13));
    }
  }
}

TEST_CASE("zeros") {
  for (const auto& p : grid()) {
    for (int k = 1; k <= 12; ++k) {
      const auto z = jacobi_zeros(k, p);
      REQUIRE(static_cast<int>(z.size()) == k);
      const double sup = std::abs(endpoint_value(k, p, Side::plus)) + std::abs(endpoint_value(k, p, Side::minus));
      for (double x : z) CHECK(std::abs(eval_jacobi(k, p, x)) < 1e-12 * sup);
    }
  }
}
