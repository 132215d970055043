#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "jbif/continuation.hpp"
#include "jbif/error.hpp"
#include "jbif/geometry.hpp"
#include "jbif/io.hpp"
#include "jbif/linearization.hpp"
#include "jbif/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_verify = 4;

jbif::Rational require_rational(const std::string& text, const char* what) {
  auto r = jbif::parse_rational(text);
  if (!r) throw jbif::Error(jbif::ErrorCode::invalid_config, std::string("cannot parse ") + what + ": '" + text + "'");
  return *r;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path target(path);
  if (target.is_relative()) {
    if (const char* dir = std::getenv("JBIF_OUTPUT_DIR"); dir && *dir) target = std::filesystem::path(dir) / target;
  }
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary);
  if (!out) throw jbif::Error(jbif::ErrorCode::invalid_config, "cannot open " + target.string());
  out << text;
}

struct SphereArgs {
  int n = 0;
  int d = 0;
  int c = 0;
  std::optional<std::string> q;
  int kmax = 4;
  std::optional<int> m;
};

struct LinearizeArgs {
  int k = 0;
  std::string alpha;
  std::string beta;
  bool exact = false;
};

struct TraceArgs {
  int k = 1;
  std::optional<std::string> alpha;
  std::optional<std::string> beta;
  std::optional<int> n;
  std::optional<int> d;
  std::optional<int> c;
  std::optional<int> m;
  double q = 2.0;
  int modes = 64;
  int quad_order = 0;
  double s0 = 1e-3;
  int direction = 1;
  bool find_fold = false;
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
  jbif::ContinuationSettings settings;
};

int run_sphere(const SphereArgs& a) {
  auto ctx = jbif::params_from_sphere(a.n, a.d, a.c);
  if (a.m) ctx = ctx.with_focal_dimension(*a.m);
  std::optional<jbif::Rational> q;
  if (a.q) q = require_rational(*a.q, "--q");
  std::cout << jbif::dump(jbif::sphere_to_json(ctx, a.kmax, q));
  return exit_ok;
}

int run_linearize(const LinearizeArgs& a) {
  const jbif::JacobiParams params =
      a.exact ? jbif::JacobiParams::parse(a.alpha, a.beta)
              : jbif::JacobiParams(jbif::to_double(require_rational(a.alpha, "--alpha")),
                                   jbif::to_double(require_rational(a.beta, "--beta")));
  const auto table = jbif::linearization_coeffs(a.k, params);
  if (params.gasper_hypotheses() && a.k >= 1) {
    const auto report = jbif::sign_classification(table);
    std::cout << jbif::dump(jbif::linearization_to_json(table, &report));
  } else {
    std::cout << jbif::dump(jbif::linearization_to_json(table));
  }
  return exit_ok;
}

int run_trace(const TraceArgs& a) {
  const bool by_params = a.alpha || a.beta;
  const bool by_sphere = a.n || a.d || a.c;
  if (by_params == by_sphere) {
    throw jbif::Error(jbif::ErrorCode::invalid_config, "give either --alpha/--beta or --n/--d/--c");
  }
  if (by_params && !(a.alpha && a.beta)) throw jbif::Error(jbif::ErrorCode::invalid_config, "need both --alpha and --beta");
  if (by_sphere && !(a.n && a.d && a.c)) throw jbif::Error(jbif::ErrorCode::invalid_config, "need all of --n, --d, --c");
  if (a.m && !by_sphere) throw jbif::Error(jbif::ErrorCode::invalid_config, "--m needs the sphere triple");

  std::optional<jbif::SphereContext> ctx;
  if (by_sphere) {
    ctx = jbif::params_from_sphere(*a.n, *a.d, *a.c);
    if (a.m) ctx = ctx->with_focal_dimension(*a.m);
  }
  const jbif::JacobiParams params = ctx ? ctx->params() : jbif::JacobiParams::parse(*a.alpha, *a.beta);
  const jbif::ProblemSpec spec(params, a.q, a.modes, a.quad_order);

  jbif::ContinuationSettings settings = a.settings;
  jbif::Branch branch;
  if (a.find_fold) {
    if (ctx && ctx->m_focal()) {
      const auto qf = jbif::supercritical_threshold(ctx->n(), *ctx->m_focal());
      if (!qf.is_infinite() && !(a.q < qf.to_double())) {
        throw jbif::Error(jbif::ErrorCode::hypothesis_violation, "q must lie below q_f");
      }
    }
    auto result = jbif::find_degenerate_with_branch(a.k, spec, settings);
    branch = std::move(result.branch);
    branch.folds.push_back(std::move(result.fold));
  } else {
    const auto start = jbif::branch_switch(a.k, spec, a.s0, a.direction, settings);
    branch = jbif::continue_branch(start, a.k, a.direction, spec, settings);
    const int n = spec.modes();
    bool bracketed = false;
    for (std::size_t i = 0; i + 1 < branch.points.size(); ++i) {
      bracketed = bracketed || branch.points[i].tangent(n) * branch.points[i + 1].tangent(n) < 0.0;
    }
    if (bracketed) branch.folds.push_back(jbif::detect_fold(branch, spec, settings));
  }

  if (a.format == "csv") {
    write_output(jbif::branch_to_csv(branch), a.output);
  } else {
    jbif::Json j = jbif::branch_to_json(branch, spec);
    j["seed"] = a.seed;
    write_output(jbif::dump(j), a.output);
  }
  return exit_ok;
}

int run_verify(const std::string& suite, std::uint64_t seed) {
  jbif::Verifier verifier(seed);
  bool ok = true;
  for (int id : jbif::Verifier::suite(suite)) {
    const auto r = verifier.run(id);
    std::cout << jbif::format_result(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? exit_ok : exit_verify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcation and degenerate solutions of the Jacobi-weighted Lane-Emden interval problem"};
  app.require_subcommand(1);

  SphereArgs sphere;
  auto* cmd_sphere = app.add_subcommand("sphere", "Jacobi exponents, eigenvalues and bifurcation values for S^n data");
  cmd_sphere->add_option("--n", sphere.n, "sphere dimension")->required();
  cmd_sphere->add_option("--d", sphere.d, "degree of the isoparametric polynomial")->required();
  cmd_sphere->add_option("--c", sphere.c, "multiplicity difference m2 - m1 (<= 0)")->required();
  cmd_sphere->add_option("--q", sphere.q, "exponent q > 1 (rational)");
  cmd_sphere->add_option("--kmax", sphere.kmax, "largest mode listed")->check(CLI::NonNegativeNumber);
  cmd_sphere->add_option("--m", sphere.m, "minimal focal-set dimension");

  LinearizeArgs lin;
  auto* cmd_lin = app.add_subcommand("linearize", "Coefficients of P_k^2 in the P_i basis with sign classification");
  cmd_lin->add_option("--k", lin.k, "degree")->required();
  cmd_lin->add_option("--alpha", lin.alpha, "alpha")->required();
  cmd_lin->add_option("--beta", lin.beta, "beta")->required();
  cmd_lin->add_flag("--exact", lin.exact, "also compute exact rational coefficients");

  TraceArgs tr;
  auto* cmd_trace = app.add_subcommand("trace", "Continue the branch bifurcating from (1, lambda_k)");
  cmd_trace->add_option("--k", tr.k, "mode")->required();
  cmd_trace->add_option("--alpha", tr.alpha, "alpha");
  cmd_trace->add_option("--beta", tr.beta, "beta");
  cmd_trace->add_option("--n", tr.n, "sphere dimension");
  cmd_trace->add_option("--d", tr.d, "isoparametric degree");
  cmd_trace->add_option("--c", tr.c, "multiplicity difference");
  cmd_trace->add_option("--m", tr.m, "minimal focal-set dimension");
  cmd_trace->add_option("--q", tr.q, "exponent q > 1")->required();
  cmd_trace->add_option("--N", tr.modes, "number of Galerkin modes");
  cmd_trace->add_option("--M", tr.quad_order, "quadrature nodes (0 = default)");
  cmd_trace->add_option("--s0", tr.s0, "first branch amplitude");
  cmd_trace->add_option("--direction", tr.direction, "+1 or -1")->check(CLI::IsMember({1, -1}));
  cmd_trace->add_flag("--find-fold", tr.find_fold, "stop at the first fold and localize it");
  cmd_trace->add_option("--newton-tol", tr.settings.newton_tol);
  cmd_trace->add_option("--max-iter", tr.settings.max_iter);
  cmd_trace->add_option("--ds-initial", tr.settings.ds_initial);
  cmd_trace->add_option("--ds-min", tr.settings.ds_min);
  cmd_trace->add_option("--ds-max", tr.settings.ds_max);
  cmd_trace->add_option("--max-steps", tr.settings.max_steps);
  cmd_trace->add_option("--amplitude-cap", tr.settings.amplitude_cap);
  cmd_trace->add_option("--lambda-floor", tr.settings.lambda_floor);
  cmd_trace->add_option("--lambda-ceiling", tr.settings.lambda_ceiling);
  cmd_trace->add_option("--format", tr.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd_trace->add_option("-o,--output", tr.output, "output file (relative paths go under $JBIF_OUTPUT_DIR)");
  cmd_trace->add_option("--seed", tr.seed, "recorded in the output");

  std::string suite = "all";
  std::uint64_t verify_seed = 20240917;
  auto* cmd_verify = app.add_subcommand("verify", "Run an acceptance suite");
  cmd_verify->add_option("suite", suite, "quadrature|endpoints|linearization|quartic|slope|kernel|folds|hygiene|all");
  cmd_verify->add_option("--seed", verify_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*cmd_sphere) return run_sphere(sphere);
    if (*cmd_lin) return run_linearize(lin);
    if (*cmd_trace) return run_trace(tr);
    if (*cmd_verify) return run_verify(suite, verify_seed);
  } catch (const jbif::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_config_error() ? exit_config : exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_config;
}
