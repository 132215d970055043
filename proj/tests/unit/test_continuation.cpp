#include "doctest.h"

#include <random>

#include "jbif/continuation.hpp"
#include "jbif/error.hpp"

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

SpectralFunction random_state(const JacobiParams& p, int modes, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd c(modes);
  c(0) = 1.0;
  for (int i = 1; i < modes; ++i) c(i) = 0.3 * unit(rng) / ((i + 1.0) * (i + 1.0));
  return SpectralFunction(p, c);
}

}  // namespace

TEST_CASE("problem construction") {
  const ProblemSpec spec(JacobiParams(1.0, 0.0), 2.0);
  CHECK(spec.modes() == 64);
  CHECK(spec.quad_order() == 192);
  CHECK(ProblemSpec::default_quad_order(8) == 32);
  CHECK(spec.refined(128).quad_order() == 384);
  CHECK(code_of([] { ProblemSpec(JacobiParams(1.0, 0.0), 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { ProblemSpec(JacobiParams(1.0, 0.0), 2.0, 4); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { ProblemSpec(JacobiParams(1.0, 0.0), 2.0, 16, 20); }) == ErrorCode::invalid_argument);
}

TEST_CASE("trivial branch") {
  const ProblemSpec spec(JacobiParams::parse("3/2", "1/2"), 3.0, 16);
  const auto one = SpectralFunction::constant(spec.params(), 16);
  CHECK(residual(one, 7.5, spec).norm() < 1e-14);
  for (int k = 1; k <= 4; ++k) {
    const Eigen::VectorXd sv = jacobian_singular_values(one, bifurcation_value(k, spec), spec);
    CHECK(sv(0) < 1e-12);
    CHECK(sv(1) > 1e-3);
  }
  const auto pts = bifurcation_points(spec, 3);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].lambda == doctest::Approx(4.0 / 2.0));
  CHECK(pts[2].lambda == doctest::Approx(3.0 * 6.0 / 2.0));
}

TEST_CASE("closed-form slope at the bifurcation point") {
  CHECK(lambda_prime_zero(1, ProblemSpec(JacobiParams::parse("1", "0"), 2.0)) == doctest::Approx(-1.2).epsilon(1e-13));
  CHECK(lambda_prime_zero(1, ProblemSpec(JacobiParams::parse("1/2", "1/2"), 3.0)) == 0.0);
  CHECK(lambda_prime_zero(3, ProblemSpec(JacobiParams::parse("0", "0"), 2.0)) == 0.0);
  // Legendre k = 2: I3 = 4/35, h = 2/5, lambda_2 = 6/(q-1)
  CHECK(lambda_prime_zero(2, ProblemSpec(JacobiParams::parse("0", "0"), 2.0)) ==
        doctest::Approx(-2.0 * 6.0 * (4.0 / 35.0) / (2.0 * 0.4)).epsilon(1e-13));
}

TEST_CASE("weighted self-adjointness of the Jacobian") {
  std::mt19937_64 rng(5);
  const ProblemSpec spec(JacobiParams(0.8, -0.3), 2.7, 20);
  for (int n = 0; n < 5; ++n) {
    const auto u = random_state(spec.params(), 20, rng);
    REQUIRE(is_positive_at_nodes(u, spec));
    const Eigen::MatrixXd J = jacobian(u, 3.3, spec);
    const Eigen::VectorXd& h = spec.basis().norms;
    const Eigen::MatrixXd HJ = h.asDiagonal() * J;
    CHECK((HJ - HJ.transpose()).cwiseAbs().maxCoeff() < 1e-10 * HJ.cwiseAbs().maxCoeff());
    const Eigen::MatrixXd S = symmetrized_jacobian(u, 3.3, spec);
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-10 * S.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("lambda derivative by finite differences") {
  std::mt19937_64 rng(9);
  const ProblemSpec spec(JacobiParams(1.0, 0.0), 2.0, 12);
  const auto u = random_state(spec.params(), 12, rng);
  const double h = 1e-6;
  const Eigen::VectorXd fd = (residual(u, 2.0 + h, spec) - residual(u, 2.0 - h, spec)) / (2 * h);
  CHECK((fd - lambda_derivative(u, spec)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("positivity guard") {
  const ProblemSpec spec(JacobiParams(0.0, 0.0), 2.0, 8);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(8);
  c(0) = 0.2;
  c(1) = 1.0;
  const SpectralFunction u(spec.params(), c);
  CHECK_FALSE(is_positive_at_nodes(u, spec));
  CHECK(code_of([&] { residual(u, 1.0, spec); }) == ErrorCode::nonpositive_state);
  CHECK(code_of([&] { jacobian(u, 1.0, spec); }) == ErrorCode::nonpositive_state);
}

TEST_CASE("shape diagnostics") {
  const JacobiParams legendre(0.0, 0.0);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(8);
  c(0) = 1.0;
  c(3) = 0.1;
  const SpectralFunction u(legendre, c);
  CHECK(count_crossings(u) == 3);
  const auto crit = critical_points(u);
  REQUIRE(crit.size() == 2);
  // P_3' = (15 t^2 - 3)/2 vanishes at +-1/sqrt(5)
  CHECK(crit[0].t == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(crit[0].kind == CriticalKind::local_max);
  CHECK(crit[1].kind == CriticalKind::local_min);
  CHECK(code_of([&] { count_crossings(SpectralFunction::constant(legendre, 8)); }) == ErrorCode::invalid_argument);

  // u - 1 = 0.1 t^3 crosses with zero slope at t = 0
  Eigen::VectorXd d = Eigen::VectorXd::Zero(8);
  d(0) = 1.0;
  d(1) = 0.1 * 3.0 / 5.0;
  d(3) = 0.1 * 2.0 / 5.0;
  const SpectralFunction flat(legendre, d);
  CHECK(flat(0.5) == doctest::Approx(1.0125).epsilon(1e-15));
  CHECK(code_of([&] { count_crossings(flat); }) == ErrorCode::tangency_detected);
}

TEST_CASE("branch switching") {
  const ProblemSpec spec(JacobiParams::parse("1", "0"), 2.0, 32);
  CHECK(code_of([&] { branch_switch(1, spec, 0.1, 1); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { branch_switch(17, spec, 1e-3, 1); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { branch_switch(1, spec, 1e-3, 0); }) == ErrorCode::invalid_argument);

  const auto& basis = spec.basis();
  double previous = 1.0;
  for (double s : {1e-2, 1e-3, 1e-4}) {
    const BranchPoint p = branch_switch(1, spec, s, 1);
    CHECK(p.residual_norm < 1e-11);
    CHECK(p.u(1.0) > 1.0);
    CHECK(p.crossings == 1);
    CHECK(p.tangent.size() == 33);
    Eigen::VectorXd v = p.u.coeffs();
    v(0) -= 1.0;
    v /= weighted_norm(v, basis);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(32);
    e(1) = 1.0 / std::sqrt(basis.norms(1));
    const double gap = weighted_norm(v - e, basis);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 1e-3);

  const BranchPoint down = branch_switch(1, spec, 1e-3, -1);
  CHECK(down.u(1.0) < 1.0);
  CHECK(down.lambda > bifurcation_value(1, spec));
}

TEST_CASE("degenerate solution for the (1,0) problem") {
  const ProblemSpec spec(JacobiParams::parse("1", "0"), 2.0);
  const auto result = find_degenerate_with_branch(1, spec);
  const FoldRecord& fold = result.fold;
  CHECK(fold.moore_spence_residual < 1e-10);
  CHECK(fold.sigma_ratio < 1e-8);
  CHECK(fold.lambda_star > 0.0);
  CHECK(fold.lambda_star < 3.0);
  CHECK(fold.point.crossings == 1);
  CHECK(fold.interior_critical_points.empty());
  CHECK(fold.at_plus_one == CriticalKind::local_max);
  CHECK(fold.at_minus_one == CriticalKind::local_min);
  CHECK(result.branch.termination == Termination::fold_found);

  // The kernel direction annihilates the Jacobian.
  const Eigen::VectorXd Jv = jacobian(fold.point.u, fold.lambda_star, spec) * fold.null_direction.coeffs();
  CHECK(weighted_norm(Jv, spec.basis()) < 1e-9);

  // Natural boundary conditions hold a posteriori.
  const auto bc = boundary_residual(fold.point.u, fold.lambda_star, spec);
  CHECK(std::abs(bc.at_minus) < 1e-8);
  CHECK(std::abs(bc.at_plus) < 1e-8);
  CHECK(projection_refinement_change(fold.point.u, spec) < 1e-10);

  // A finer discretization sees the same fold.
  const BranchPoint fine = refine_point(fold.point, spec.refined(96));
  CHECK(fine.lambda == doctest::Approx(fold.lambda_star).epsilon(1e-10));
}

TEST_CASE("degenerate search preconditions") {
  CHECK(code_of([] { find_degenerate(1, ProblemSpec(JacobiParams(0.5, 0.5), 3.0)); }) == ErrorCode::parity_violation);
  CHECK(code_of([] { find_degenerate(2, ProblemSpec(JacobiParams(0.0, 1.0), 2.0)); }) == ErrorCode::hypothesis_violation);
  CHECK(code_of([] { find_degenerate(40, ProblemSpec(JacobiParams(1.0, 0.0), 2.0)); }) == ErrorCode::invalid_argument);

  // n = 5, d = 2, c = -2, m = 1 gives q_f = 3.
  const auto ctx = params_from_sphere(5, 2, -2).with_focal_dimension(1);
  CHECK(code_of([&] { find_degenerate(1, ProblemSpec(ctx.params(), 3.5), ctx); }) == ErrorCode::hypothesis_violation);
  CHECK(find_degenerate(1, ProblemSpec(ctx.params(), 2.0), ctx).point.crossings == 1);
}

TEST_CASE("continuation stops at the lambda ceiling") {
  const ProblemSpec spec(JacobiParams::parse("1", "0"), 2.0, 32);
  ContinuationSettings settings;
  settings.lambda_ceiling = 3.05;
  const auto start = branch_switch(1, spec, 1e-3, -1, settings);
  const Branch b = continue_branch(start, 1, -1, spec, settings);
  CHECK(b.termination == Termination::lambda_ceiling);
  for (const auto& p : b.points) CHECK(p.lambda < 3.05);
}
