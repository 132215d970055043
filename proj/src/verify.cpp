#include "jbif/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "jbif/continuation.hpp"
#include "jbif/error.hpp"
#include "jbif/io.hpp"
#include "jbif/jacobi.hpp"
#include "jbif/linearization.hpp"

namespace jbif {

namespace {

using Clock = std::chrono::steady_clock;

// Collects failures; keeps the first few messages for the report line.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (messages_.size() < 3) messages_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }

  CriterionResult finish(int id, std::string name, Clock::time_point start) const {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.passed = failures_ == 0 && checks_ > 0;
    std::ostringstream out;
    out << checks_ - failures_ << "/" << checks_ << " checks";
    for (const auto& n : notes_) out << "; " << n;
    for (const auto& m : messages_) out << "; FAIL " << m;
    r.detail = out.str();
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::vector<std::string> messages_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string label(const JacobiParams& p) {
  std::ostringstream out;
  out << "(" << p.alpha() << "," << p.beta() << ")";
  return out.str();
}

std::vector<JacobiParams> base_grid() {
  return {JacobiParams::parse("0", "0"),       JacobiParams::parse("1/2", "1/2"),
          JacobiParams::parse("1", "0"),       JacobiParams::parse("3/2", "1/2"),
          JacobiParams::parse("-0.4", "-0.4"), JacobiParams::parse("0.3", "-0.7")};
}

std::vector<JacobiParams> sign_grid() {
  auto grid = base_grid();
  grid.push_back(JacobiParams::parse("3/2", "3/2"));
  grid.push_back(JacobiParams::parse("2", "-1/2"));
  return grid;
}

struct FoldCase {
  int k;
  const char* alpha;
  const char* beta;
  double q;
};

constexpr FoldCase fold_cases[] = {{2, "1/2", "1/2", 3.0}, {1, "1", "0", 2.0}, {3, "3/2", "1/2", 2.0}};

std::string case_label(const FoldCase& c) {
  std::ostringstream out;
  out << "k=" << c.k << " (" << c.alpha << "," << c.beta << ") q=" << c.q;
  return out.str();
}

int sgn(double x) { return (x > 0) - (x < 0); }

}  // namespace

struct Verifier::Cache {
  struct Entry {
    FoldCase config;
    ProblemSpec spec;
    std::optional<DegenerateResult> result;
    std::string error;
    double seconds = 0.0;
  };
  std::optional<std::vector<Entry>> folds;
};

Verifier::Verifier(std::uint64_t seed) : seed_(seed), cache_(std::make_unique<Cache>()) {}
Verifier::~Verifier() = default;

// 1
CriterionResult Verifier::orthogonality_and_quadrature() {
  const auto start = Clock::now();
  Tally tally;
  constexpr int kmax = 30;
  constexpr int m = 64;
  double worst_orth = 0.0;
  double worst_moment = 0.0;
  for (const auto& params : base_grid()) {
    const auto rule = cached_rule(params, m);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(kmax + 1, kmax + 1);
    std::vector<double> values(kmax + 1);
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      eval_jacobi_all(params, rule->nodes[i], values);
      const Eigen::Map<Eigen::VectorXd> v(values.data(), kmax + 1);
      gram.noalias() += rule->weights[i] * v * v.transpose();
    }
    for (int k = 0; k <= kmax; ++k) {
      for (int j = 0; j < k; ++j) {
        const double scale = std::sqrt(weighted_norm_sq_closed_form(j, params) * weighted_norm_sq_closed_form(k, params));
        const double rel = std::abs(gram(j, k)) / scale;
        worst_orth = std::max(worst_orth, rel);
        tally.expect(rel < 1e-11, label(params) + " <P_" + std::to_string(j) + ",P_" + std::to_string(k) + ">");
      }
    }

    const auto nu = normalized_moments(params, 2 * m - 1);
    const double mu0 = weight_integral(params);
    for (int j = 0; j <= 2 * m - 1; ++j) {
      double quad = 0.0;
      double magnitude = 0.0;
      for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
        const double xj = std::pow(rule->nodes[i], j);
        quad += rule->weights[i] * xj;
        magnitude += rule->weights[i] * std::abs(xj);
      }
      const double exact = to_double(nu[j]) * mu0;
      const double denom = nu[j] == 0 ? magnitude : std::abs(exact);
      const double rel = std::abs(quad - exact) / denom;
      worst_moment = std::max(worst_moment, rel);
      tally.expect(rel < 1e-12, label(params) + " moment t^" + std::to_string(j));
    }
  }
  tally.note("max orthogonality " + fmt("%.2e", worst_orth));
  tally.note("max moment error " + fmt("%.2e", worst_moment));
  return tally.finish(1, "orthogonality and quadrature", start);
}

// 2
CriterionResult Verifier::endpoint_formulas() {
  const auto start = Clock::now();
  Tally tally;
  constexpr int kmax = 30;
  double worst = 0.0;
  for (const auto& params : base_grid()) {
    for (int k = 0; k <= kmax; ++k) {
      for (Side side : {Side::minus, Side::plus}) {
        const double t = static_cast<double>(side);
        const Rational exact = endpoint_value_exact(k, params, side);
        const double ref = to_double(exact);
        const double closed = endpoint_value(k, params, side);
        const double recur = eval_jacobi(k, params, t);
        const double rel = std::max(std::abs(closed - ref), std::abs(recur - ref)) / std::abs(ref);
        worst = std::max(worst, rel);
        tally.expect(rel < 1e-12, label(params) + " P_" + std::to_string(k) + "(" + fmt("%+.0f", t) + ")");
      }
      const Rational plus = endpoint_value_exact(k, params, Side::plus);
      const Rational minus_k = endpoint_value_exact(k, params, Side::minus);
      const Rational minus_next = endpoint_value_exact(k + 1, params, Side::minus);
      tally.expect(plus > 0, label(params) + " P_" + std::to_string(k) + "(1) > 0");
      tally.expect(minus_k * minus_next < 0, label(params) + " alternation at -1, k=" + std::to_string(k));
      tally.expect(eval_jacobi(k, params, 1.0) > 0 &&
                       eval_jacobi(k, params, -1.0) * eval_jacobi(k + 1, params, -1.0) < 0,
                   label(params) + " float sign pattern, k=" + std::to_string(k));
    }
  }
  tally.note("max relative error " + fmt("%.2e", worst));
  return tally.finish(2, "endpoint formulas", start);
}

// 3
CriterionResult Verifier::linearization_signs() {
  const auto start = Clock::now();
  Tally tally;
  constexpr int kmax = 12;
  for (const auto& params : sign_grid()) {
    for (int k = 1; k <= kmax; ++k) {
      const std::string where = label(params) + " k=" + std::to_string(k);
      const LinearizationTable table = linearization_coeffs(k, params);
      const SignReport report = sign_classification(table);
      const double i3_band = 1e-12 * std::pow(table.h_k, 1.5);
      const SignClass float_cube =
          std::abs(table.i3) <= i3_band ? SignClass::zero : (table.i3 > 0 ? SignClass::positive : SignClass::negative);

      if (params.symmetric()) {
        if (k % 2 == 1) {
          tally.expect(float_cube == SignClass::zero, where + " I3 = 0");
        } else {
          tally.expect(float_cube == SignClass::positive, where + " I3 > 0");
        }
        for (int i = 0; i <= 2 * k; ++i) {
          const SignClass want = i % 2 == 1 ? SignClass::zero : SignClass::positive;
          tally.expect(report.classes[i] == want, where + " C^" + std::to_string(i));
        }
      } else {
        tally.expect(float_cube == SignClass::positive, where + " I3 > 0");
        for (int i = 0; i <= 2 * k; ++i) {
          tally.expect(report.classes[i] == SignClass::positive, where + " C^" + std::to_string(i) + " > 0");
        }
      }
      tally.expect(report.discrepancies.empty(), where + " expected-sign discrepancies");
      tally.expect(report.exact, where + " exact path available");
      tally.expect(report.float_exact_mismatches.empty(), where + " float vs exact coefficient signs");
      tally.expect(report.cube_sign == float_cube, where + " float vs exact I3 sign");
    }
  }
  return tally.finish(3, "linearization signs", start);
}

// 4
CriterionResult Verifier::quartic() {
  const auto start = Clock::now();
  Tally tally;
  std::mt19937_64 rng(seed_);
  const Rational as[] = {Rational(1, 4), Rational(1), Rational(2), Rational(7, 2)};
  double worst = 0.0;
  for (int k = 2; k <= 8; ++k) {
    std::uniform_real_distribution<double> pick(0.0, 2.0 * k + 2.0);
    for (const auto& a : as) {
      const std::string where = "k=" + std::to_string(k) + " a=" + to_string(a);
      const GasperQuartic gq = gasper_quartic(k, a);
      for (int n = 0; n < 5; ++n) {
        const double J = pick(rng);
        const double f = gq.factored(J);
        const double e = gq.expanded(J);
        double scale = 0.0;
        for (std::size_t i = 0; i < gq.coefficients().size(); ++i) {
          scale += std::abs(gq.coefficients()[i]) * std::pow(J, static_cast<double>(i));
        }
        const double rel = std::abs(f - e) / std::max(std::abs(f), scale);
        worst = std::max(worst, rel);
        tally.expect(rel < 1e-10, where + " J=" + fmt("%.6g", J));
        const Rational Jx = exact_from_double(J);
        tally.expect(gq.factored_exact(Jx) == gq.expanded_exact(Jx), where + " exact identity");
      }
      const auto& c = *gq.exact_coefficients();
      tally.expect(c[4] < 0 && c[3] < 0 && c[1] > 0 && c[0] > 0, where + " coefficient signs");
      try {
        const QuarticStructure s = quartic_sign_structure(gq);
        tally.expect(s.x0 > 0 && s.coefficient_sign_changes == 1, where + " unique positive root");
      } catch (const Error& e) {
        tally.expect(false, where + " " + e.what());
      }
    }
  }
  tally.note("max relative gap " + fmt("%.2e", worst));
  return tally.finish(4, "quartic", start);
}

// 5
CriterionResult Verifier::branch_slope() {
  const auto start = Clock::now();
  Tally tally;
  const JacobiParams grid[] = {JacobiParams::parse("1", "0"), JacobiParams::parse("3/2", "1/2"),
                               JacobiParams::parse("1/2", "1/2"), JacobiParams::parse("0", "0")};
  double worst_slope = 0.0;
  double worst_quad = 0.0;
  for (const auto& params : grid) {
    for (double q : {2.0, 3.0}) {
      const ProblemSpec spec(params, q);
      for (int k = 1; k <= 4; ++k) {
        const std::string where = label(params) + " q=" + fmt("%g", q) + " k=" + std::to_string(k);
        const double lk = bifurcation_value(k, spec);
        const double slope = lambda_prime_zero(k, spec);
        try {
          if (slope != 0.0) {
            ContinuationSettings settings;
            settings.ds_initial = 2e-3;
            settings.ds_max = 1e-2;
            settings.max_steps = 4;
            const BranchPoint first = branch_switch(k, spec, 2e-3, +1, settings);
            const Branch branch = continue_branch(first, k, +1, spec, settings);
            const int n = static_cast<int>(branch.points.size());
            Eigen::MatrixXd A(n, 3);
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i) {
              const double sigma = branch.points[i].u.coeffs()(k);
              A(i, 0) = sigma;
              A(i, 1) = sigma * sigma;
              A(i, 2) = sigma * sigma * sigma;
              y(i) = branch.points[i].lambda - lk;
            }
            const Eigen::VectorXd fit = A.colPivHouseholderQr().solve(y);
            const double rel = std::abs(fit(0) - slope) / std::abs(slope);
            worst_slope = std::max(worst_slope, rel);
            tally.expect(n == 5 && rel < 0.01, where + " slope " + fmt("%.6g", fit(0)) + " vs " + fmt("%.6g", slope));
          } else {
            constexpr int samples = 9;
            Eigen::VectorXd s2(samples);
            Eigen::VectorXd d(samples);
            for (int i = 0; i < samples; ++i) {
              const double s0 = std::pow(10.0, -4.0 + 2.0 * i / (samples - 1));
              const BranchPoint p = branch_switch(k, spec, s0, +1);
              const double sigma = p.u.coeffs()(k);
              s2(i) = sigma * sigma;
              d(i) = p.lambda - lk;
            }
            const double C = s2.dot(d) / s2.dot(s2);
            const double resid = (d - C * s2).norm() / d.norm();
            worst_quad = std::max(worst_quad, resid);
            tally.expect(resid < 0.05, where + " quadratic fit residual " + fmt("%.3g", resid));
          }
        } catch (const Error& e) {
          tally.expect(false, where + " " + e.what());
        }
      }
    }
  }
  tally.note("max slope error " + fmt("%.2e", worst_slope));
  tally.note("max quadratic residual " + fmt("%.2e", worst_quad));
  return tally.finish(5, "branch slope", start);
}

// 6
CriterionResult Verifier::trivial_kernel() {
  const auto start = Clock::now();
  Tally tally;
  constexpr int modes = 64;
  for (const auto& params : base_grid()) {
    for (double q : {2.0, 3.0}) {
      const ProblemSpec spec(params, q, modes);
      const auto one = SpectralFunction::constant(params, modes);
      for (int k = 1; k <= modes / 4; ++k) {
        const std::string where = label(params) + " q=" + fmt("%g", q) + " k=" + std::to_string(k);
        const Eigen::MatrixXd J = jacobian(one, bifurcation_value(k, spec), spec);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
        const Eigen::VectorXd& sv = svd.singularValues();
        int small = 0;
        Eigen::Index smallest = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
          if (sv(i) < 1e-10) ++small;
          if (sv(i) < sv(smallest)) smallest = i;
        }
        Eigen::Index mode = 0;
        svd.matrixV().col(smallest).cwiseAbs().maxCoeff(&mode);
        tally.expect(small == 1 && mode == k, where + " small singular values " + std::to_string(small) +
                                                  ", mode " + std::to_string(mode));
      }
    }
  }
  return tally.finish(6, "trivial branch kernel", start);
}

// 7
CriterionResult Verifier::degenerate_solutions() {
  const auto start = Clock::now();
  if (!cache_->folds) {
    std::vector<Cache::Entry> entries;
    for (const auto& c : fold_cases) {
      Cache::Entry entry{c, ProblemSpec(JacobiParams::parse(c.alpha, c.beta), c.q), std::nullopt, {}, 0.0};
      const auto t0 = Clock::now();
      try {
        entry.result = find_degenerate_with_branch(c.k, entry.spec);
      } catch (const Error& e) {
        entry.error = e.what();
      }
      entry.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
      entries.push_back(std::move(entry));
    }
    cache_->folds = std::move(entries);
  }

  Tally tally;
  for (const auto& entry : *cache_->folds) {
    const std::string where = case_label(entry.config);
    if (!entry.result) {
      tally.expect(false, where + " " + entry.error);
      continue;
    }
    const FoldRecord& fold = entry.result->fold;
    const int k = entry.config.k;
    const double lk = bifurcation_value(k, entry.spec);
    tally.expect(fold.moore_spence_residual < 1e-10, where + " Moore-Spence residual");
    tally.expect(fold.sigma_ratio < 1e-8, where + " sigma ratio");
    tally.expect(fold.point.crossings == k, where + " crossings");
    tally.expect(static_cast<int>(fold.interior_critical_points.size()) == k - 1 &&
                     fold.point.critical_points == k - 1,
                 where + " critical points");
    tally.expect(fold.lambda_star > 0 && fold.lambda_star < lk, where + " lambda* range");
    tally.expect(entry.seconds < 60.0, where + " runtime");
    tally.note(where + ": lambda*=" + fmt("%.10g", fold.lambda_star) + " in " + fmt("%.2f s", entry.seconds));
  }
  return tally.finish(7, "degenerate solutions", start);
}

// 8
CriterionResult Verifier::branch_invariants() {
  if (!cache_->folds) degenerate_solutions();
  const auto start = Clock::now();
  Tally tally;
  for (const auto& entry : *cache_->folds) {
    const std::string where = case_label(entry.config);
    if (!entry.result) {
      tally.expect(false, where + " no branch");
      continue;
    }
    const auto& pts = entry.result->branch.points;
    const int crossings = pts.front().crossings;
    const int minus_sign = sgn(pts.front().u(-1.0) - 1.0);
    const int plus_sign = sgn(pts.front().u(1.0) - 1.0);
    bool constant_crossings = true;
    bool constant_minus = minus_sign != 0;
    bool constant_plus = plus_sign != 0;
    bool plus_above = true;
    bool lambda_positive = true;
    for (const auto& p : pts) {
      constant_crossings = constant_crossings && p.crossings == crossings;
      constant_minus = constant_minus && sgn(p.u(-1.0) - 1.0) == minus_sign;
      constant_plus = constant_plus && sgn(p.u(1.0) - 1.0) == plus_sign;
      plus_above = plus_above && p.u(1.0) > 1.0;
      lambda_positive = lambda_positive && p.lambda > 1e-4;
    }
    tally.expect(constant_crossings, where + " crossing count");
    tally.expect(constant_minus, where + " sign of u(-1)-1");
    tally.expect(constant_plus, where + " sign of u(1)-1");
    tally.expect(plus_above, where + " u(1) > 1");
    tally.expect(lambda_positive, where + " lambda > 1e-4");
    tally.note(where + ": " + std::to_string(pts.size()) + " points");
  }
  return tally.finish(8, "branch invariants", start);
}

// 9
CriterionResult Verifier::hygiene() {
  if (!cache_->folds) degenerate_solutions();
  const auto start = Clock::now();
  Tally tally;

  // Jacobian against central differences.
  {
    std::mt19937_64 rng(seed_);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> lambda_pick(0.5, 10.0);
    const JacobiParams params = JacobiParams::parse("3/2", "1/2");
    constexpr int modes = 16;
    const ProblemSpec spec(params, 2.5, modes);
    double worst = 0.0;
    int made = 0;
    while (made < 10) {
      Eigen::VectorXd c(modes);
      c(0) = 1.0;
      for (int i = 1; i < modes; ++i) c(i) = 0.4 * unit(rng) / ((i + 1.0) * (i + 1.0));
      const SpectralFunction u(params, c);
      if (!is_positive_at_nodes(u, spec)) continue;
      ++made;
      const double lambda = lambda_pick(rng);
      const Eigen::MatrixXd J = jacobian(u, lambda, spec);
      Eigen::MatrixXd fd(modes, modes);
      for (int j = 0; j < modes; ++j) {
        const double h = 1e-6;
        Eigen::VectorXd up = c;
        Eigen::VectorXd dn = c;
        up(j) += h;
        dn(j) -= h;
        fd.col(j) = (residual(SpectralFunction(params, up), lambda, spec) -
                     residual(SpectralFunction(params, dn), lambda, spec)) / (2 * h);
      }
      const double rel = (J - fd).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff();
      worst = std::max(worst, rel);
      tally.expect(rel < 1e-6, "finite-difference Jacobian, state " + std::to_string(made));
    }
    tally.note("max Jacobian gap " + fmt("%.2e", worst));
  }

  // N -> 2N refinement of every accepted point.
  {
    double worst = 0.0;
    for (const auto& entry : *cache_->folds) {
      const std::string where = case_label(entry.config);
      if (!entry.result) {
        tally.expect(false, where + " no branch to refine");
        continue;
      }
      const ProblemSpec fine = entry.spec.refined(2 * entry.spec.modes(), 2 * entry.spec.quad_order());
      for (const auto& p : entry.result->branch.points) {
        try {
          const BranchPoint r = refine_point(p, fine);
          const double rel = std::abs(r.lambda - p.lambda) / std::abs(p.lambda);
          worst = std::max(worst, rel);
          tally.expect(rel < 1e-8, where + " refinement at s=" + fmt("%.4g", p.s));
        } catch (const Error& e) {
          tally.expect(false, where + " refinement: " + e.what());
        }
      }
    }
    tally.note("max refinement change " + fmt("%.2e", worst));
  }

  // Determinism.
  {
    auto produce = [&]() {
      std::mt19937_64 rng(seed_);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const ProblemSpec spec(JacobiParams::parse("1", "0"), 2.0, 16);
      ContinuationSettings settings;
      settings.max_steps = 20;
      const double s0 = 1e-3 * (1.0 + unit(rng));
      const Branch branch = continue_branch(branch_switch(1, spec, s0, +1, settings), 1, +1, spec, settings);
      Json j = branch_to_json(branch, spec);
      j["seed"] = seed_;
      return dump(j);
    };
    tally.expect(produce() == produce(), "identical seeds give identical JSON");
  }
  return tally.finish(9, "numerical hygiene", start);
}

const std::vector<std::string>& Verifier::suite_names() {
  static const std::vector<std::string> names = {"quadrature", "endpoints", "linearization", "quartic", "slope",
                                                 "kernel",     "folds",     "hygiene",       "all"};
  return names;
}

std::vector<int> Verifier::suite(std::string_view name) {
  static const std::map<std::string, std::vector<int>, std::less<>> table = {
      {"quadrature", {1}}, {"endpoints", {2}}, {"linearization", {3}}, {"quartic", {4}},
      {"slope", {5}},      {"kernel", {6}},    {"folds", {7, 8}},       {"hygiene", {9}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9}},
      // older names
      {"theorem21", {3}},  {"gasper", {4}},    {"theorem31", {5}},      {"bifurcation", {6}},
      {"theorem13", {7, 8}}};
  const auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorCode::invalid_config, "unknown suite '" + std::string(name) + "'");
  return it->second;
}

CriterionResult Verifier::run(int id) {
  switch (id) {
    case 1: return orthogonality_and_quadrature();
    case 2: return endpoint_formulas();
    case 3: return linearization_signs();
    case 4: return quartic();
    case 5: return branch_slope();
    case 6: return trivial_kernel();
    case 7: return degenerate_solutions();
    case 8: return branch_invariants();
    case 9: return hygiene();
    default: throw Error(ErrorCode::invalid_config, "no criterion " + std::to_string(id));
  }
}

std::vector<CriterionResult> Verifier::run_suite(std::string_view name) {
  std::vector<CriterionResult> out;
  for (int id : suite(name)) out.push_back(run(id));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "[%s] %d %s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace jbif
