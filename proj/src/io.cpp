#include "jbif/io.hpp"

#include <cstdio>
#include <sstream>

namespace jbif {

namespace {

Json coeff_array(const Eigen::VectorXd& c) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) out.push_back(c(i));
  return out;
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Json linearization_to_json(const LinearizationTable& table, const SignReport* report) {
  Json j;
  j["k"] = table.k;
  j["alpha"] = table.params.alpha();
  j["beta"] = table.params.beta();
  j["coeffs"] = table.coeffs;
  if (table.exact_coeffs) {
    Json exact = Json::array();
    for (const auto& c : *table.exact_coeffs) exact.push_back(to_string(c));
    j["coeffs_exact"] = exact;
  }
  j["i3"] = table.i3;
  j["h_k"] = table.h_k;
  if (report) {
    Json classes = Json::array();
    for (auto c : report->classes) classes.push_back(std::string(to_string(c)));
    j["classification"] = classes;
    j["classification_exact"] = report->exact;
    Json issues = Json::array();
    for (const auto& d : report->discrepancies) {
      issues.push_back({{"index", d.index},
                        {"expected", std::string(to_string(d.expected))},
                        {"observed", std::string(to_string(d.observed))}});
    }
    j["discrepancies"] = issues;
  }
  return j;
}

Json fold_to_json(const FoldRecord& fold) {
  Json j;
  j["lambda_star"] = fold.lambda_star;
  j["coeffs"] = coeff_array(fold.point.u.coeffs());
  j["null_direction"] = coeff_array(fold.null_direction.coeffs());
  j["crossings"] = fold.point.crossings;
  j["critical_points"] = fold.point.critical_points;
  j["moore_spence_residual"] = fold.moore_spence_residual;
  j["sigma_ratio"] = fold.sigma_ratio;
  Json crit = Json::array();
  for (const auto& c : fold.interior_critical_points) crit.push_back({{"t", c.t}, {"kind", to_string(c.kind)}});
  j["interior_critical_points"] = crit;
  j["at_minus_one"] = to_string(fold.at_minus_one);
  j["at_plus_one"] = to_string(fold.at_plus_one);
  return j;
}

Json branch_to_json(const Branch& branch, const ProblemSpec& spec) {
  Json j;
  j["spec"] = {{"alpha", spec.params().alpha()},
               {"beta", spec.params().beta()},
               {"q", spec.q()},
               {"N", spec.modes()},
               {"M", spec.quad_order()}};
  j["k"] = branch.k;
  j["direction"] = branch.direction;
  j["termination"] = to_string(branch.termination);
  Json points = Json::array();
  for (const auto& p : branch.points) {
    points.push_back({{"s", p.s},
                      {"lambda", p.lambda},
                      {"coeffs", coeff_array(p.u.coeffs())},
                      {"sigma_min", p.sigma_min},
                      {"crossings", p.crossings},
                      {"critical_points", p.critical_points},
                      {"residual_norm", p.residual_norm}});
  }
  j["points"] = points;
  Json folds = Json::array();
  for (const auto& f : branch.folds) folds.push_back(fold_to_json(f));
  j["folds"] = folds;
  return j;
}

std::string branch_to_csv(const Branch& branch) {
  std::ostringstream out;
  out << "s,lambda,u_at_minus1,u_at_plus1,sigma_min,crossings,critical_points\n";
  for (const auto& p : branch.points) {
    out << format17(p.s) << ',' << format17(p.lambda) << ',' << format17(p.u(-1.0)) << ','
        << format17(p.u(1.0)) << ',' << format17(p.sigma_min) << ',' << p.crossings << ','
        << p.critical_points << '\n';
  }
  return out.str();
}

Json sphere_to_json(const SphereContext& ctx, int kmax, const std::optional<Rational>& q) {
  const auto& params = ctx.params();
  Json j;
  j["n"] = ctx.n();
  j["d"] = ctx.d();
  j["c"] = ctx.c();
  j["alpha"] = to_string(params.exact_alpha());
  j["beta"] = to_string(params.exact_beta());
  Json eig = Json::array();
  for (int i = 0; i <= kmax; ++i) eig.push_back({{"i", i}, {"mu", to_string(sphere_eigenvalue(i, ctx))}});
  j["eigenvalues"] = eig;
  if (q) {
    j["q"] = to_string(*q);
    Json lambdas = Json::array();
    for (int k = 1; k <= kmax; ++k) {
      const Rational lk = bifurcation_value_exact(k, params, *q);
      lambdas.push_back({{"k", k}, {"lambda", to_string(lk)}, {"value", to_double(lk)}});
    }
    j["bifurcation_points"] = lambdas;
  }
  if (ctx.m_focal()) {
    const auto qf = supercritical_threshold(ctx.n(), *ctx.m_focal());
    j["m_focal"] = *ctx.m_focal();
    j["q_f"] = qf.is_infinite() ? std::string("inf") : to_string(*qf.finite);
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace jbif
