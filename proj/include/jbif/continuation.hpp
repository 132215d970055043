#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jbif/geometry.hpp"
#include "jbif/jacobi.hpp"

namespace jbif {

/// Basis tables shared by every state of one discretization: Gauss-Jacobi
/// nodes/weights, P_i at the nodes, h_i and the diagonal -i(i + a).
struct GalerkinBasis {
  int modes = 0;
  int quad_order = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::MatrixXd values;  // modes x quad_order, values(i, m) = P_i(x_m)
  Eigen::VectorXd norms;   // h_i computed with the same rule
  Eigen::VectorXd eigen;   // -i (i + alpha + beta + 1)
};

/// Galerkin discretization of
///   (1-t^2) u'' + (beta - alpha - (alpha+beta+2) t) u' - lambda (u - u^q) = 0
/// in the Jacobi basis P_0 .. P_{N-1}.
class ProblemSpec {
 public:
  /// quad_order <= 0 selects max(2N + 16, 3N).
  ProblemSpec(JacobiParams params, double q, int modes = 64, int quad_order = 0);

  const JacobiParams& params() const noexcept { return params_; }
  double q() const noexcept { return q_; }
  int modes() const noexcept { return basis_->modes; }
  int quad_order() const noexcept { return basis_->quad_order; }
  const GalerkinBasis& basis() const noexcept { return *basis_; }

  /// Same problem with N and M replaced.
  ProblemSpec refined(int modes, int quad_order = 0) const;

  static int default_quad_order(int modes);

 private:
  JacobiParams params_;
  double q_;
  std::shared_ptr<const GalerkinBasis> basis_;
};

/// u(t) = sum_i c_i P_i(t).
class SpectralFunction {
 public:
  SpectralFunction(JacobiParams params, Eigen::VectorXd coeffs);
  static SpectralFunction constant(const JacobiParams& params, int modes, double value = 1.0);

  const JacobiParams& params() const noexcept { return params_; }
  const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  int modes() const noexcept { return static_cast<int>(coeffs_.size()); }

  double operator()(double t) const;
  double derivative(double t, int order = 1) const;

  /// Values at the quadrature nodes of a basis.
  Eigen::VectorXd nodal(const GalerkinBasis& basis) const;
  /// sqrt(sum h_i c_i^2)
  double weighted_norm(const GalerkinBasis& basis) const;

 private:
  JacobiParams params_;
  Eigen::VectorXd coeffs_;
};

/// u > 0 at every quadrature node of the spec.
bool is_positive_at_nodes(const SpectralFunction& u, const ProblemSpec& spec);

// --- discrete operator ---

/// Coefficient vector of F(u, lambda): -i(i+a) c_i - lambda proj_i(u - u^q).
Eigen::VectorXd residual(const SpectralFunction& u, double lambda, const ProblemSpec& spec);
/// d residual / d c.
Eigen::MatrixXd jacobian(const SpectralFunction& u, double lambda, const ProblemSpec& spec);
/// d residual / d lambda = -proj(u - u^q).
Eigen::VectorXd lambda_derivative(const SpectralFunction& u, const ProblemSpec& spec);

/// sqrt(sum h_i r_i^2) for a coefficient vector.
double weighted_norm(const Eigen::VectorXd& coeffs, const GalerkinBasis& basis);

/// Symmetric form D^{1/2} J D^{-1/2} of the Jacobian, D = diag(h).
Eigen::MatrixXd symmetrized_jacobian(const SpectralFunction& u, double lambda, const ProblemSpec& spec);

/// Singular values of the symmetrized Jacobian, ascending.
Eigen::VectorXd jacobian_singular_values(const SpectralFunction& u, double lambda, const ProblemSpec& spec);

struct BoundaryResidual {
  double at_minus;  // (2 beta + 2) u'(-1) - lambda (u(-1) - u(-1)^q)
  double at_plus;   // -(2 alpha + 2) u'(1) - lambda (u(1) - u(1)^q)
};
BoundaryResidual boundary_residual(const SpectralFunction& u, double lambda, const ProblemSpec& spec);

/// Relative change of proj(u - u^q) when the quadrature order is doubled.
double projection_refinement_change(const SpectralFunction& u, const ProblemSpec& spec);

// --- bifurcation data ---

struct BifurcationPoint {
  int k;
  double lambda;
};

std::vector<BifurcationPoint> bifurcation_points(const ProblemSpec& spec, int kmax);
double bifurcation_value(int k, const ProblemSpec& spec);

/// d lambda / ds at the bifurcation point for the branch with du/ds(0) = P_k:
/// -q lambda_k I3 / (2 h_k).
double lambda_prime_zero(int k, const ProblemSpec& spec);

// --- continuation ---

struct ContinuationSettings {
  double newton_tol = 1e-11;
  int max_iter = 25;
  double ds_initial = 1e-3;
  double ds_min = 1e-6;
  double ds_max = 0.05;
  int max_steps = 400;
  double amplitude_cap = 1e3;
  double lambda_floor = 1e-4;
  double lambda_ceiling = std::numeric_limits<double>::infinity();
  double degenerate_tol = 1e-8;
  double transversality_tol = 1e-8;
  /// Stop once the first fold has been bracketed.
  bool stop_after_fold = false;
};

struct BranchPoint {
  BranchPoint(SpectralFunction state, double lambda_value, double arclength)
      : u(std::move(state)), lambda(lambda_value), s(arclength) {}

  SpectralFunction u;
  double lambda = 0.0;
  double s = 0.0;
  double residual_norm = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  int crossings = 0;
  int critical_points = 0;
  int newton_iterations = 0;
  /// Unit tangent (dc/ds, dlambda/ds) in the weighted product; empty until computed.
  Eigen::VectorXd tangent;
};

enum class CriticalKind { local_min, local_max };
std::string to_string(CriticalKind kind);

struct CriticalPoint {
  double t;
  CriticalKind kind;
};

struct FoldRecord {
  FoldRecord(BranchPoint fold_point, SpectralFunction kernel)
      : point(std::move(fold_point)), lambda_star(point.lambda), null_direction(std::move(kernel)) {}

  BranchPoint point;
  double lambda_star = 0.0;
  SpectralFunction null_direction;
  double moore_spence_residual = 0.0;
  double sigma_ratio = 0.0;  // sigma_min / sigma_max
  std::vector<CriticalPoint> interior_critical_points;
  CriticalKind at_minus_one = CriticalKind::local_min;
  CriticalKind at_plus_one = CriticalKind::local_min;
  int newton_iterations = 0;
};

enum class Termination { max_steps, lambda_floor, lambda_ceiling, amplitude_cap, fold_found };
std::string to_string(Termination t);

struct Branch {
  int k = 0;
  int direction = 1;
  std::vector<BranchPoint> points;
  std::vector<FoldRecord> folds;
  Termination termination = Termination::max_steps;
};

/// Newton-corrected first point off (1, lambda_k) along direction * P_k.
BranchPoint branch_switch(int k, const ProblemSpec& spec, double s0, int direction,
                          const ContinuationSettings& settings = {});

/// Pseudo-arclength continuation from a converged start point.
Branch continue_branch(const BranchPoint& start, int k, int direction, const ProblemSpec& spec,
                       const ContinuationSettings& settings = {});

/// Moore-Spence localization of the first fold in the traced branch.
FoldRecord detect_fold(const Branch& branch, const ProblemSpec& spec, const ContinuationSettings& settings = {});

/// branch_switch -> continue_branch (lambda decreasing) -> detect_fold.
struct DegenerateResult {
  Branch branch;
  FoldRecord fold;
};
DegenerateResult find_degenerate_with_branch(int k, const ProblemSpec& spec, const ContinuationSettings& settings = {});
FoldRecord find_degenerate(int k, const ProblemSpec& spec, const ContinuationSettings& settings = {});
/// Also requires 1 < q < q_f when the context carries a focal dimension.
FoldRecord find_degenerate(int k, const ProblemSpec& spec, const SphereContext& ctx,
                           const ContinuationSettings& settings = {});

// --- solution-shape diagnostics ---

int count_crossings(const SpectralFunction& u, double transversality_tol = 1e-8);
std::vector<CriticalPoint> critical_points(const SpectralFunction& u, double transversality_tol = 1e-8);
int count_critical_points(const SpectralFunction& u, double transversality_tol = 1e-8);

/// Re-solves a branch point in a (finer) discretization on the hyperplane through
/// the point orthogonal to its tangent. Returns the corrected point.
BranchPoint refine_point(const BranchPoint& point, const ProblemSpec& fine, const ContinuationSettings& settings = {});

}  // namespace jbif
