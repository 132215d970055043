#include <optional>
#include <string>
#include <variant>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jbif/continuation.hpp"
#include "jbif/error.hpp"
#include "jbif/geometry.hpp"
#include "jbif/io.hpp"
#include "jbif/jacobi.hpp"
#include "jbif/linearization.hpp"
#include "jbif/verify.hpp"

namespace py = pybind11;

namespace {

using Exponent = std::variant<std::string, double>;

// Strings are parsed exactly; floats give a float-only parameter set.
jbif::JacobiParams make_params(const Exponent& alpha, const Exponent& beta) {
  if (std::holds_alternative<std::string>(alpha) && std::holds_alternative<std::string>(beta)) {
    return jbif::JacobiParams::parse(std::get<std::string>(alpha), std::get<std::string>(beta));
  }
  auto as_double = [](const Exponent& e) {
    if (const auto* d = std::get_if<double>(&e)) return *d;
    const auto r = jbif::parse_rational(std::get<std::string>(e));
    if (!r) throw jbif::Error(jbif::ErrorCode::invalid_config, "cannot parse '" + std::get<std::string>(e) + "'");
    return jbif::to_double(*r);
  };
  return jbif::JacobiParams(as_double(alpha), as_double(beta));
}

jbif::ContinuationSettings settings_from(int max_steps, double ds_max, double ds_initial) {
  jbif::ContinuationSettings s;
  s.max_steps = max_steps;
  s.ds_max = ds_max;
  s.ds_initial = ds_initial;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of jacobi_bif";
  py::register_exception<jbif::Error>(m, "JbifError", PyExc_RuntimeError);

  m.def(
      "sphere_json",
      [](int n, int d, int c, std::optional<std::string> q, int kmax, std::optional<int> m_focal) {
        auto ctx = jbif::params_from_sphere(n, d, c);
        if (m_focal) ctx = ctx.with_focal_dimension(*m_focal);
        std::optional<jbif::Rational> qr;
        if (q) {
          qr = jbif::parse_rational(*q);
          if (!qr) throw jbif::Error(jbif::ErrorCode::invalid_config, "cannot parse q '" + *q + "'");
        }
        return jbif::dump(jbif::sphere_to_json(ctx, kmax, qr));
      },
      py::arg("n"), py::arg("d"), py::arg("c"), py::arg("q") = py::none(), py::arg("kmax") = 4,
      py::arg("m") = py::none());

  m.def(
      "linearize_json",
      [](int k, const Exponent& alpha, const Exponent& beta) {
        const auto params = make_params(alpha, beta);
        const auto table = jbif::linearization_coeffs(k, params);
        if (params.gasper_hypotheses() && k >= 1) {
          const auto report = jbif::sign_classification(table);
          return jbif::dump(jbif::linearization_to_json(table, &report));
        }
        return jbif::dump(jbif::linearization_to_json(table));
      },
      py::arg("k"), py::arg("alpha"), py::arg("beta"));

  m.def(
      "eval_jacobi",
      [](int k, const Exponent& alpha, const Exponent& beta, double t) {
        return jbif::eval_jacobi(k, make_params(alpha, beta), t);
      },
      py::arg("k"), py::arg("alpha"), py::arg("beta"), py::arg("t"));

  m.def(
      "gauss_jacobi",
      [](const Exponent& alpha, const Exponent& beta, int order) {
        auto rule = jbif::gauss_jacobi_rule(make_params(alpha, beta), order);
        return py::make_tuple(rule.nodes, rule.weights);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("order"));

  m.def(
      "lambda_prime_zero",
      [](int k, const Exponent& alpha, const Exponent& beta, double q, int modes) {
        return jbif::lambda_prime_zero(k, jbif::ProblemSpec(make_params(alpha, beta), q, modes));
      },
      py::arg("k"), py::arg("alpha"), py::arg("beta"), py::arg("q"), py::arg("modes") = 64);

  m.def(
      "trace_json",
      [](int k, const Exponent& alpha, const Exponent& beta, double q, int modes, double s0, int direction,
         int max_steps, double ds_max, double ds_initial) {
        const jbif::ProblemSpec spec(make_params(alpha, beta), q, modes);
        const auto settings = settings_from(max_steps, ds_max, ds_initial);
        jbif::Branch branch;
        {
          py::gil_scoped_release release;
          branch = jbif::continue_branch(jbif::branch_switch(k, spec, s0, direction, settings), k, direction, spec,
                                         settings);
        }
        return jbif::dump(jbif::branch_to_json(branch, spec));
      },
      py::arg("k"), py::arg("alpha"), py::arg("beta"), py::arg("q"), py::arg("modes") = 64, py::arg("s0") = 1e-3,
      py::arg("direction") = 1, py::arg("max_steps") = 400, py::arg("ds_max") = 0.05, py::arg("ds_initial") = 1e-3);

  m.def(
      "find_degenerate_json",
      [](int k, const Exponent& alpha, const Exponent& beta, double q, int modes) {
        const jbif::ProblemSpec spec(make_params(alpha, beta), q, modes);
        std::optional<jbif::DegenerateResult> result;
        {
          py::gil_scoped_release release;
          result = jbif::find_degenerate_with_branch(k, spec);
        }
        return jbif::dump(jbif::branch_to_json(result->branch, spec));
      },
      py::arg("k"), py::arg("alpha"), py::arg("beta"), py::arg("q"), py::arg("modes") = 64);

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        jbif::Verifier verifier(seed);
        py::list out;
        for (int id : jbif::Verifier::suite(suite)) {
          jbif::CriterionResult r;
          {
            py::gil_scoped_release release;
            r = verifier.run(id);
          }
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "all", py::arg("seed") = 20240917);

  m.attr("__version__") = JBIF_VERSION;
}
