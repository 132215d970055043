#include "jbif/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "jbif/error.hpp"
#include "jbif/linearization.hpp"

namespace jbif {

namespace {

std::shared_ptr<const GalerkinBasis> build_basis(const JacobiParams& params, int modes, int quad_order) {
  auto basis = std::make_shared<GalerkinBasis>();
  basis->modes = modes;
  basis->quad_order = quad_order;
  const auto rule = cached_rule(params, quad_order);
  basis->nodes = Eigen::Map<const Eigen::VectorXd>(rule->nodes.data(), quad_order);
  basis->weights = Eigen::Map<const Eigen::VectorXd>(rule->weights.data(), quad_order);
  basis->values.resize(modes, quad_order);
  std::vector<double> column(modes);
  for (int m = 0; m < quad_order; ++m) {
    eval_jacobi_all(params, rule->nodes[m], column);
    for (int i = 0; i < modes; ++i) basis->values(i, m) = column[i];
  }
  basis->norms = basis->values.array().square().matrix() * basis->weights;
  basis->eigen.resize(modes);
  for (int i = 0; i < modes; ++i) basis->eigen(i) = -static_cast<double>(i) * (i + params.a());
  return basis;
}

}  // namespace

// --- ProblemSpec ---

int ProblemSpec::default_quad_order(int modes) { return std::max(2 * modes + 16, 3 * modes); }

ProblemSpec::ProblemSpec(JacobiParams params, double q, int modes, int quad_order)
    : params_(std::move(params)), q_(q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw Error(ErrorCode::invalid_argument, "q must exceed 1");
  if (modes < 8) throw Error(ErrorCode::invalid_argument, "need at least 8 Jacobi modes");
  if (quad_order <= 0) quad_order = default_quad_order(modes);
  if (quad_order < 2 * modes) throw Error(ErrorCode::invalid_argument, "quadrature order must be >= 2N");
  basis_ = build_basis(params_, modes, quad_order);
}

ProblemSpec ProblemSpec::refined(int modes, int quad_order) const {
  return ProblemSpec(params_, q_, modes, quad_order);
}

// --- SpectralFunction ---

SpectralFunction::SpectralFunction(JacobiParams params, Eigen::VectorXd coeffs)
    : params_(std::move(params)), coeffs_(std::move(coeffs)) {}

SpectralFunction SpectralFunction::constant(const JacobiParams& params, int modes, double value) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(modes);
  c(0) = value;
  return SpectralFunction(params, std::move(c));
}

double SpectralFunction::operator()(double t) const {
  std::vector<double> p(coeffs_.size());
  eval_jacobi_all(params_, t, p);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += coeffs_(static_cast<Eigen::Index>(i)) * p[i];
  return sum;
}

double SpectralFunction::derivative(double t, int order) const {
  if (order == 0) return (*this)(t);
  const int n = modes();
  if (n <= order) return 0.0;
  // d^r/dt^r P_i^(al,be) = prod_{j=1..r} (i+al+be+j)/2 * P_{i-r}^(al+r,be+r).
  const JacobiParams shifted(params_.alpha() + order, params_.beta() + order);
  std::vector<double> p(n - order);
  eval_jacobi_all(shifted, t, p);
  double sum = 0.0;
  for (int i = order; i < n; ++i) {
    double factor = 1.0;
    for (int j = 1; j <= order; ++j) factor *= 0.5 * (i + params_.alpha() + params_.beta() + j);
    sum += coeffs_(i) * factor * p[i - order];
  }
  return sum;
}

Eigen::VectorXd SpectralFunction::nodal(const GalerkinBasis& basis) const {
  return basis.values.transpose() * coeffs_;
}

double SpectralFunction::weighted_norm(const GalerkinBasis& basis) const {
  return jbif::weighted_norm(coeffs_, basis);
}

double weighted_norm(const Eigen::VectorXd& coeffs, const GalerkinBasis& basis) {
  return std::sqrt((basis.norms.array() * coeffs.array().square()).sum());
}

bool is_positive_at_nodes(const SpectralFunction& u, const ProblemSpec& spec) {
  return (u.nodal(spec.basis()).array() > 0.0).all();
}

// --- discrete operator ---

namespace {

void require_modes(const SpectralFunction& u, const ProblemSpec& spec) {
  if (u.modes() != spec.modes()) throw Error(ErrorCode::invalid_argument, "state size does not match N");
}

Eigen::ArrayXd positive_nodal(const SpectralFunction& u, const ProblemSpec& spec) {
  require_modes(u, spec);
  Eigen::ArrayXd values = u.nodal(spec.basis()).array();
  if (!(values > 0.0).all()) throw Error(ErrorCode::nonpositive_state, "u <= 0 at a quadrature node");
  return values;
}

// proj_i(g) = sum_m w_m g_m P_i(x_m) / h_i
Eigen::VectorXd project(const Eigen::ArrayXd& nodal_values, const GalerkinBasis& basis) {
  Eigen::VectorXd weighted = (basis.weights.array() * nodal_values).matrix();
  return ((basis.values * weighted).array() / basis.norms.array()).matrix();
}

// Galerkin matrix of multiplication by a nodal function: (P diag(w f) P^T)_ij / h_i.
Eigen::MatrixXd multiplication_matrix(const Eigen::ArrayXd& nodal_values, const GalerkinBasis& basis) {
  Eigen::MatrixXd scaled = basis.values * (basis.weights.array() * nodal_values).matrix().asDiagonal();
  Eigen::MatrixXd gram = scaled * basis.values.transpose();
  return basis.norms.cwiseInverse().asDiagonal() * gram;
}

Eigen::ArrayXd nonlinearity(const Eigen::ArrayXd& u, double q) { return u - u.pow(q); }

Eigen::ArrayXd nonlinearity_slope(const Eigen::ArrayXd& u, double q) { return 1.0 - q * u.pow(q - 1.0); }

}  // namespace

Eigen::VectorXd residual(const SpectralFunction& u, double lambda, const ProblemSpec& spec) {
  const auto& basis = spec.basis();
  const Eigen::ArrayXd values = positive_nodal(u, spec);
  return (basis.eigen.array() * u.coeffs().array()).matrix() -
         lambda * project(nonlinearity(values, spec.q()), basis);
}

Eigen::MatrixXd jacobian(const SpectralFunction& u, double lambda, const ProblemSpec& spec) {
  const auto& basis = spec.basis();
  const Eigen::ArrayXd values = positive_nodal(u, spec);
  Eigen::MatrixXd jac = -lambda * multiplication_matrix(nonlinearity_slope(values, spec.q()), basis);
  jac.diagonal() += basis.eigen;
  return jac;
}

Eigen::VectorXd lambda_derivative(const SpectralFunction& u, const ProblemSpec& spec) {
  const Eigen::ArrayXd values = positive_nodal(u, spec);
  return -project(nonlinearity(values, spec.q()), spec.basis());
}

Eigen::MatrixXd symmetrized_jacobian(const SpectralFunction& u, double lambda, const ProblemSpec& spec) {
  const Eigen::VectorXd root = spec.basis().norms.cwiseSqrt();
  Eigen::MatrixXd s = root.asDiagonal() * jacobian(u, lambda, spec) * root.cwiseInverse().asDiagonal();
  return 0.5 * (s + s.transpose());
}

Eigen::VectorXd jacobian_singular_values(const SpectralFunction& u, double lambda, const ProblemSpec& spec) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized_jacobian(u, lambda, spec),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::numerical_breakdown, "eigensolver failed");
  Eigen::VectorXd sv = solver.eigenvalues().cwiseAbs();
  std::sort(sv.data(), sv.data() + sv.size());
  return sv;
}

BoundaryResidual boundary_residual(const SpectralFunction& u, double lambda, const ProblemSpec& spec) {
  const double q = spec.q();
  const double um = u(-1.0);
  const double up = u(1.0);
  return {(2.0 * spec.params().beta() + 2.0) * u.derivative(-1.0) - lambda * (um - std::pow(um, q)),
          -(2.0 * spec.params().alpha() + 2.0) * u.derivative(1.0) - lambda * (up - std::pow(up, q))};
}

double projection_refinement_change(const SpectralFunction& u, const ProblemSpec& spec) {
  const ProblemSpec doubled = spec.refined(spec.modes(), 2 * spec.quad_order());
  const Eigen::VectorXd coarse = project(nonlinearity(positive_nodal(u, spec), spec.q()), spec.basis());
  const Eigen::VectorXd fine = project(nonlinearity(positive_nodal(u, doubled), spec.q()), doubled.basis());
  const double scale = weighted_norm(fine, doubled.basis());
  return weighted_norm(fine - coarse, doubled.basis()) / (scale > 0.0 ? scale : 1.0);
}

// --- bifurcation data ---

double bifurcation_value(int k, const ProblemSpec& spec) {
  return k * (k + spec.params().a()) / (spec.q() - 1.0);
}

std::vector<BifurcationPoint> bifurcation_points(const ProblemSpec& spec, int kmax) {
  if (kmax < 1) throw Error(ErrorCode::invalid_argument, "kmax must be >= 1");
  std::vector<BifurcationPoint> out;
  for (int k = 1; k <= kmax; ++k) out.push_back({k, bifurcation_value(k, spec)});
  return out;
}

double lambda_prime_zero(int k, const ProblemSpec& spec) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  const JacobiParams& params = spec.params();
  double ratio;  // I3 / h_k
  if (params.has_exact()) {
    const ExactPolynomial p = exact_coeffs(k, params);
    const Rational cube = exact_weighted_integral(p * p * p, params).ratio;
    const Rational square = exact_weighted_integral(p * p, params).ratio;
    ratio = to_double(cube / square);
  } else {
    ratio = cube_integral(k, params) / weighted_norm_sq(k, params);
  }
  return -spec.q() * bifurcation_value(k, spec) * ratio / 2.0;
}

// --- Newton machinery ---

namespace {

using Vec = Eigen::VectorXd;

SpectralFunction state_of(const Vec& x, const ProblemSpec& spec) {
  return SpectralFunction(spec.params(), x.head(spec.modes()));
}

double weighted_dot(const Vec& x, const Vec& y, const GalerkinBasis& basis) {
  const int n = basis.modes;
  return (basis.norms.array() * x.head(n).array() * y.head(n).array()).sum() + x(n) * y(n);
}

// Row r with r . x = <x, t> in the weighted product on (c, lambda).
Vec weighted_row(const Vec& tangent, const GalerkinBasis& basis) {
  Vec row = tangent;
  row.head(basis.modes).array() *= basis.norms.array();
  return row;
}

struct CorrectorResult {
  Vec x;
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

// Newton on {F(c, lambda) = 0, row . x = target}.
CorrectorResult correct(const ProblemSpec& spec, Vec x, const Vec& row, double target,
                        const ContinuationSettings& settings) {
  const auto& basis = spec.basis();
  const int n = spec.modes();
  CorrectorResult result;
  for (int iter = 0; iter <= settings.max_iter; ++iter) {
    const SpectralFunction u = state_of(x, spec);
    const double lambda = x(n);
    const Vec r = residual(u, lambda, spec);
    const double rnorm = weighted_norm(r, basis);
    const double scale = 1.0 + u.weighted_norm(basis);
    const double constraint = row.dot(x) - target;
    result.residual_norm = rnorm;
    result.iterations = iter;
    if (!std::isfinite(rnorm) || rnorm > 1e8 * scale) break;
    if (rnorm < settings.newton_tol * scale && std::abs(constraint) < settings.newton_tol * scale) {
      result.converged = true;
      break;
    }
    if (iter == settings.max_iter) break;
    Eigen::MatrixXd system(n + 1, n + 1);
    system.topLeftCorner(n, n) = jacobian(u, lambda, spec);
    system.topRightCorner(n, 1) = lambda_derivative(u, spec);
    system.bottomRows(1) = row.transpose();
    Vec rhs(n + 1);
    rhs.head(n) = r;
    rhs(n) = constraint;
    const Vec step = system.partialPivLu().solve(rhs);
    if (!step.allFinite()) break;
    x -= step;
  }
  result.x = std::move(x);
  return result;
}

// Unit tangent of the solution curve at x, oriented so that orient_row . tangent > 0.
Vec curve_tangent(const ProblemSpec& spec, const Vec& x, const Vec& orient_row) {
  const int n = spec.modes();
  const SpectralFunction u = state_of(x, spec);
  Eigen::MatrixXd system(n + 1, n + 1);
  system.topLeftCorner(n, n) = jacobian(u, x(n), spec);
  system.topRightCorner(n, 1) = lambda_derivative(u, spec);
  system.bottomRows(1) = orient_row.transpose();
  Vec rhs = Vec::Zero(n + 1);
  rhs(n) = 1.0;
  Vec tangent = system.partialPivLu().solve(rhs);
  if (!tangent.allFinite()) throw Error(ErrorCode::numerical_breakdown, "singular bordered tangent system");
  return tangent / std::sqrt(weighted_dot(tangent, tangent, spec.basis()));
}

Vec pack(const BranchPoint& p) {
  Vec x(p.u.modes() + 1);
  x.head(p.u.modes()) = p.u.coeffs();
  x(p.u.modes()) = p.lambda;
  return x;
}

BranchPoint make_point(const ProblemSpec& spec, const Vec& x, double s, const ContinuationSettings& settings) {
  const int n = spec.modes();
  BranchPoint point(state_of(x, spec), x(n), s);
  point.residual_norm = weighted_norm(residual(point.u, point.lambda, spec), spec.basis());
  const Vec sv = jacobian_singular_values(point.u, point.lambda, spec);
  point.sigma_min = sv(0);
  point.sigma_max = sv(sv.size() - 1);
  point.crossings = count_crossings(point.u, settings.transversality_tol);
  point.critical_points = count_critical_points(point.u, settings.transversality_tol);
  return point;
}

double sup_norm_at_nodes(const SpectralFunction& u, const ProblemSpec& spec) {
  return u.nodal(spec.basis()).cwiseAbs().maxCoeff();
}

}  // namespace

// --- continuation ---

BranchPoint branch_switch(int k, const ProblemSpec& spec, double s0, int direction,
                          const ContinuationSettings& settings) {
  const int n = spec.modes();
  if (k < 1 || 2 * k > n) throw Error(ErrorCode::invalid_argument, "need 1 <= k <= N/2");
  if (!(s0 > 0.0 && s0 <= 0.05)) throw Error(ErrorCode::invalid_argument, "s0 must lie in (0, 0.05]");
  if (direction != 1 && direction != -1) throw Error(ErrorCode::invalid_argument, "direction must be +1 or -1");

  const auto& basis = spec.basis();
  const double root_h = std::sqrt(basis.norms(k));
  // Amplitude of P_k in u - 1; the branch parameter s.
  const double amplitude = direction * s0 / root_h;

  Vec x = Vec::Zero(n + 1);
  x(0) = 1.0;
  x(k) = amplitude;
  x(n) = bifurcation_value(k, spec) + amplitude * lambda_prime_zero(k, spec);

  // Phase condition <u - 1, P_k>_w = direction * s0 * sqrt(h_k).
  Vec row = Vec::Zero(n + 1);
  row(k) = basis.norms(k);
  CorrectorResult corrected;
  try {
    corrected = correct(spec, x, row, direction * s0 * root_h, settings);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::nonpositive_state) {
      throw Error(ErrorCode::nonpositive_state, "branch-switch predictor left the positive cone; reduce s0");
    }
    throw;
  }
  if (!corrected.converged) throw Error(ErrorCode::newton_divergence, "branch-switch corrector failed");

  Vec orient = Vec::Zero(n + 1);
  orient(k) = direction * root_h;
  BranchPoint point = make_point(spec, corrected.x, s0, settings);
  point.newton_iterations = corrected.iterations;
  point.tangent = curve_tangent(spec, corrected.x, orient);
  return point;
}

Branch continue_branch(const BranchPoint& start, int k, int direction, const ProblemSpec& spec,
                       const ContinuationSettings& settings) {
  const int n = spec.modes();
  if (start.u.modes() != n) throw Error(ErrorCode::invalid_argument, "start point has the wrong size");
  const auto& basis = spec.basis();

  Branch branch;
  branch.k = k;
  branch.direction = direction;
  branch.points.push_back(start);
  if (branch.points.back().tangent.size() != n + 1) {
    Vec orient = Vec::Zero(n + 1);
    orient(k) = direction * std::sqrt(basis.norms(k));
    branch.points.back().tangent = curve_tangent(spec, pack(start), orient);
  }

  Vec x = pack(branch.points.back());
  Vec tangent = branch.points.back().tangent;
  double s = start.s;
  double ds = std::clamp(settings.ds_initial, settings.ds_min, settings.ds_max);

  for (int step = 0; step < settings.max_steps; ++step) {
    const Vec predicted = x + ds * tangent;
    const Vec row = weighted_row(tangent, basis);
    CorrectorResult corrected;
    bool ok = false;
    Vec next_tangent;
    try {
      corrected = correct(spec, predicted, row, row.dot(predicted), settings);
      if (corrected.converged) {
        next_tangent = curve_tangent(spec, corrected.x, row);
        ok = weighted_dot(next_tangent, tangent, basis) > 0.5;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::nonpositive_state && e.code() != ErrorCode::numerical_breakdown) throw;
    }
    if (!ok) {
      ds *= 0.5;
      if (ds < settings.ds_min) {
        throw Error(ErrorCode::newton_divergence, "step size fell below ds_min during continuation");
      }
      --step;
      continue;
    }

    const double lambda = corrected.x(n);
    if (!(lambda > settings.lambda_floor)) {
      branch.termination = Termination::lambda_floor;
      break;
    }
    if (!(lambda < settings.lambda_ceiling)) {
      branch.termination = Termination::lambda_ceiling;
      break;
    }
    const Vec delta = corrected.x - x;
    s += std::sqrt(weighted_dot(delta, delta, basis));
    BranchPoint point = make_point(spec, corrected.x, s, settings);
    point.newton_iterations = corrected.iterations;
    point.tangent = next_tangent;
    if (sup_norm_at_nodes(point.u, spec) > settings.amplitude_cap) {
      branch.termination = Termination::amplitude_cap;
      break;
    }
    const bool fold = tangent(n) * next_tangent(n) < 0.0;
    branch.points.push_back(std::move(point));
    x = corrected.x;
    tangent = next_tangent;

    if (fold && settings.stop_after_fold) {
      branch.termination = Termination::fold_found;
      break;
    }
    if (corrected.iterations <= 3) {
      ds = std::min(1.5 * ds, settings.ds_max);
    } else if (corrected.iterations >= 6) {
      ds = std::max(0.7 * ds, settings.ds_min);
    }
  }
  return branch;
}

// --- fold localization ---

FoldRecord detect_fold(const Branch& branch, const ProblemSpec& spec, const ContinuationSettings& settings) {
  const int n = spec.modes();
  const auto& basis = spec.basis();
  const auto& pts = branch.points;

  std::size_t bracket = pts.size();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].tangent.size() == n + 1 && pts[i + 1].tangent.size() == n + 1 &&
        pts[i].tangent(n) * pts[i + 1].tangent(n) < 0.0) {
      bracket = i;
      break;
    }
  }
  if (bracket == pts.size()) throw Error(ErrorCode::no_fold_bracket, "no sign change of dlambda/ds in the branch");

  const BranchPoint& left = pts[bracket];
  const BranchPoint& right = pts[bracket + 1];
  const BranchPoint& seed = std::abs(left.tangent(n)) <= std::abs(right.tangent(n)) ? left : right;

  // Unknowns z = (c, lambda, v); equations F = 0, J v = 0, (<v, v>_w - 1)/2 = 0.
  Vec z(2 * n + 1);
  z.head(n) = seed.u.coeffs();
  z(n) = seed.lambda;
  Vec v = seed.tangent.head(n);
  v /= weighted_norm(v, basis);
  z.tail(n) = v;

  const double q = spec.q();
  double ms_residual = 0.0;
  int iterations = 0;
  bool stalled = false;
  for (int iter = 0; iter <= settings.max_iter; ++iter) {
    iterations = iter;
    const SpectralFunction u(spec.params(), z.head(n));
    const double lambda = z(n);
    const Vec vv = z.tail(n);
    const Eigen::ArrayXd values = positive_nodal(u, spec);
    const Eigen::ArrayXd vnodal = (basis.values.transpose() * vv).array();
    const Eigen::ArrayXd slope = nonlinearity_slope(values, q);
    const Eigen::ArrayXd curvature = -q * (q - 1.0) * values.pow(q - 2.0);

    const Eigen::MatrixXd jac = jacobian(u, lambda, spec);
    Vec g(2 * n + 1);
    g.head(n) = residual(u, lambda, spec);
    g.segment(n, n) = jac * vv;
    g(2 * n) = 0.5 * ((basis.norms.array() * vv.array().square()).sum() - 1.0);
    ms_residual = std::sqrt(std::pow(weighted_norm(g.head(n), basis), 2) +
                            std::pow(weighted_norm(g.segment(n, n), basis), 2) + g(2 * n) * g(2 * n));
    if (!std::isfinite(ms_residual)) break;
    if (stalled || ms_residual < 1e-13 * (1.0 + u.weighted_norm(basis))) break;
    if (iter == settings.max_iter) break;

    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1);
    system.block(0, 0, n, n) = jac;
    system.block(0, n, n, 1) = -project(nonlinearity(values, q), basis);
    system.block(n, 0, n, n) = -lambda * multiplication_matrix(curvature * vnodal, basis);
    system.block(n, n, n, 1) = -project(slope * vnodal, basis);
    system.block(n, n + 1, n, n) = jac;
    system.block(2 * n, n + 1, 1, n) = (basis.norms.array() * vv.array()).matrix().transpose();
    const Vec step = system.partialPivLu().solve(g);
    if (!step.allFinite()) break;
    z -= step;
    // Roundoff floor: one more residual evaluation, then stop.
    stalled = step.norm() < 1e-15 * (1.0 + z.norm());
  }
  if (!(ms_residual < 1e-10)) {
    throw Error(ErrorCode::newton_divergence, "Moore-Spence system did not converge");
  }

  Vec x(n + 1);
  x.head(n) = z.head(n);
  x(n) = z(n);
  const Vec d = x - pack(left);
  BranchPoint point = make_point(spec, x, left.s + std::sqrt(weighted_dot(d, d, basis)), settings);
  point.newton_iterations = iterations;
  point.tangent = curve_tangent(spec, x, weighted_row(seed.tangent, basis));

  Vec null = z.tail(n);
  if ((basis.norms.array() * null.array() * seed.tangent.head(n).array()).sum() < 0.0) null = -null;

  FoldRecord fold(point, SpectralFunction(spec.params(), null));
  fold.moore_spence_residual = ms_residual;
  fold.sigma_ratio = point.sigma_min / point.sigma_max;
  fold.newton_iterations = iterations;
  fold.interior_critical_points = critical_points(point.u, settings.transversality_tol);
  fold.at_minus_one = point.u(-1.0) > 1.0 ? CriticalKind::local_max : CriticalKind::local_min;
  fold.at_plus_one = point.u(1.0) > 1.0 ? CriticalKind::local_max : CriticalKind::local_min;

  if (!(fold.sigma_ratio < settings.degenerate_tol)) {
    throw Error(ErrorCode::numerical_breakdown, "fold point is not degenerate to tolerance");
  }
  for (std::size_t i = 0; i <= bracket + 1; ++i) {
    if (fold.lambda_star > pts[i].lambda * (1.0 + 1e-12)) {
      throw Error(ErrorCode::numerical_breakdown, "located fold is not the lambda-minimum of the traced segment");
    }
  }
  return fold;
}

DegenerateResult find_degenerate_with_branch(int k, const ProblemSpec& spec, const ContinuationSettings& settings) {
  const JacobiParams& params = spec.params();
  if (!params.gasper_hypotheses()) {
    throw Error(ErrorCode::hypothesis_violation, "degenerate solutions need alpha >= beta and alpha+beta+1 > 0");
  }
  if (k < 1 || 2 * k > spec.modes()) throw Error(ErrorCode::invalid_argument, "need 1 <= k <= N/2");
  if (params.symmetric() && k % 2 == 1) {
    throw Error(ErrorCode::parity_violation, "alpha == beta with odd k: lambda'(0) = 0, direction undetermined");
  }

  // lambda'(0) < 0 here, so the D_k^+ side (direction +1) is the lambda-decreasing one.
  ContinuationSettings run = settings;
  run.stop_after_fold = true;
  const BranchPoint start = branch_switch(k, spec, run.ds_initial, +1, run);
  Branch branch = continue_branch(start, k, +1, spec, run);
  if (branch.termination != Termination::fold_found) {
    throw Error(ErrorCode::no_fold_bracket,
                "continuation ended (" + to_string(branch.termination) + ") before reaching a fold");
  }
  FoldRecord fold = detect_fold(branch, spec, run);
  branch.folds.push_back(fold);
  DegenerateResult result{std::move(branch), std::move(fold)};

  const BranchPoint& p = result.fold.point;
  if (p.crossings != k || p.critical_points != k - 1) {
    throw Error(ErrorCode::structure_violation,
                "fold shape mismatch: crossings " + std::to_string(p.crossings) + ", critical points " +
                    std::to_string(p.critical_points) + "; refine N");
  }
  return result;
}

FoldRecord find_degenerate(int k, const ProblemSpec& spec, const ContinuationSettings& settings) {
  return find_degenerate_with_branch(k, spec, settings).fold;
}

FoldRecord find_degenerate(int k, const ProblemSpec& spec, const SphereContext& ctx,
                           const ContinuationSettings& settings) {
  if (!(ctx.params() == spec.params())) {
    throw Error(ErrorCode::invalid_argument, "sphere context and problem use different (alpha, beta)");
  }
  if (ctx.m_focal()) {
    const ExtendedRational qf = supercritical_threshold(ctx.n(), *ctx.m_focal());
    if (!(spec.q() < qf.to_double())) {
      throw Error(ErrorCode::hypothesis_violation, "q must lie below the supercritical threshold q_f");
    }
  }
  return find_degenerate(k, spec, settings);
}

// --- refinement ---

BranchPoint refine_point(const BranchPoint& point, const ProblemSpec& fine, const ContinuationSettings& settings) {
  const int coarse_n = point.u.modes();
  const int n = fine.modes();
  if (n < coarse_n) throw Error(ErrorCode::invalid_argument, "refinement must not reduce N");
  if (point.tangent.size() != coarse_n + 1) throw Error(ErrorCode::invalid_argument, "point has no tangent");

  Vec x = Vec::Zero(n + 1);
  x.head(coarse_n) = point.u.coeffs();
  x(n) = point.lambda;
  Vec tangent = Vec::Zero(n + 1);
  tangent.head(coarse_n) = point.tangent.head(coarse_n);
  tangent(n) = point.tangent(coarse_n);
  const Vec row = weighted_row(tangent, fine.basis());
  const CorrectorResult corrected = correct(fine, x, row, row.dot(x), settings);
  if (!corrected.converged) throw Error(ErrorCode::newton_divergence, "refined corrector failed");
  BranchPoint refined = make_point(fine, corrected.x, point.s, settings);
  refined.newton_iterations = corrected.iterations;
  refined.tangent = curve_tangent(fine, corrected.x, row);
  return refined;
}

// --- shape diagnostics ---

namespace {

template <typename F>
std::vector<double> grid_roots(int modes, F&& f, double slope_tol, const std::function<double(double)>& slope,
                               const char* what) {
  const int count = std::max(8 * modes, 16);
  std::vector<double> grid(count);
  for (int j = 0; j < count; ++j) grid[j] = -std::cos(std::numbers::pi * j / (count - 1));
  grid.front() = -1.0;
  grid.back() = 1.0;
  std::vector<double> values(count);
  double slope_sup = 0.0;
  for (int j = 0; j < count; ++j) {
    values[j] = f(grid[j]);
    slope_sup = std::max(slope_sup, std::abs(slope(grid[j])));
  }
  if (!(slope_sup > 0.0)) throw Error(ErrorCode::invalid_argument, std::string(what) + ": function is constant");
  const double threshold = slope_tol * slope_sup;

  std::vector<double> roots;
  auto accept = [&](double r) {
    if (!(std::abs(slope(r)) > threshold)) {
      throw Error(ErrorCode::tangency_detected, std::string(what) + ": near-double root; refine N");
    }
    roots.push_back(r);
  };
  for (int j = 0; j + 1 < count; ++j) {
    if (values[j] == 0.0 && j > 0) {
      accept(grid[j]);
      continue;
    }
    if (values[j] * values[j + 1] < 0.0) {
      double lo = grid[j];
      double hi = grid[j + 1];
      double flo = values[j];
      for (int it = 0; it < 200 && hi - lo > 4e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      accept(0.5 * (lo + hi));
    }
  }
  return roots;
}

}  // namespace

int count_crossings(const SpectralFunction& u, double transversality_tol) {
  const auto roots = grid_roots(
      u.modes(), [&](double t) { return u(t) - 1.0; }, transversality_tol,
      [&](double t) { return u.derivative(t); }, "count_crossings");
  return static_cast<int>(roots.size());
}

std::vector<CriticalPoint> critical_points(const SpectralFunction& u, double transversality_tol) {
  const auto roots = grid_roots(
      u.modes(), [&](double t) { return u.derivative(t); }, transversality_tol,
      [&](double t) { return u.derivative(t, 2); }, "count_critical_points");
  std::vector<CriticalPoint> out;
  for (double r : roots) {
    if (r <= -1.0 || r >= 1.0) continue;
    out.push_back({r, u(r) < 1.0 ? CriticalKind::local_min : CriticalKind::local_max});
  }
  return out;
}

int count_critical_points(const SpectralFunction& u, double transversality_tol) {
  return static_cast<int>(critical_points(u, transversality_tol).size());
}

std::string to_string(CriticalKind kind) { return kind == CriticalKind::local_min ? "local_min" : "local_max"; }

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_steps: return "max_steps";
    case Termination::lambda_floor: return "lambda_floor";
    case Termination::lambda_ceiling: return "lambda_ceiling";
    case Termination::amplitude_cap: return "amplitude_cap";
    case Termination::fold_found: return "fold_found";
  }
  return "unknown";
}

}  // namespace jbif
