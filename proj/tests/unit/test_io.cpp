#include "doctest.h"

#include <sstream>

#include "jbif/io.hpp"

using namespace jbif;

namespace {

Branch short_branch(const ProblemSpec& spec) {
  ContinuationSettings settings;
  settings.max_steps = 8;
  return continue_branch(branch_switch(1, spec, 1e-3, 1, settings), 1, 1, spec, settings);
}

}  // namespace

TEST_CASE("branch JSON layout") {
  const ProblemSpec spec(JacobiParams::parse("1", "0"), 2.0, 16);
  const Branch b = short_branch(spec);
  const Json j = branch_to_json(b, spec);
  CHECK(j["spec"]["alpha"] == 1.0);
  CHECK(j["spec"]["N"] == 16);
  CHECK(j["spec"]["M"] == 48);
  CHECK(j["k"] == 1);
  CHECK(j["direction"] == 1);
  CHECK(j["termination"] == "max_steps");
  REQUIRE(j["points"].size() == b.points.size());
  const auto& p0 = j["points"][0];
  for (const char* key : {"s", "lambda", "coeffs", "sigma_min", "crossings", "critical_points", "residual_norm"}) {
    CHECK(p0.contains(key));
  }
  CHECK(p0["coeffs"].size() == 16);
  CHECK(j["folds"].empty());
}

TEST_CASE("doubles round-trip through the text form") {
  const ProblemSpec spec(JacobiParams::parse("1", "0"), 2.0, 16);
  const Branch b = short_branch(spec);
  const Json back = Json::parse(dump(branch_to_json(b, spec)));
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    CHECK(back["points"][i]["lambda"].get<double>() == b.points[i].lambda);
    for (int m = 0; m < 16; ++m) CHECK(back["points"][i]["coeffs"][m].get<double>() == b.points[i].u.coeffs()(m));
  }
}

TEST_CASE("CSV has one row per point") {
  const ProblemSpec spec(JacobiParams::parse("1", "0"), 2.0, 16);
  const Branch b = short_branch(spec);
  std::istringstream in(branch_to_csv(b));
  std::string line;
  std::getline(in, line);
  CHECK(line == "s,lambda,u_at_minus1,u_at_plus1,sigma_min,crossings,critical_points");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == b.points.size());
}

TEST_CASE("repeated runs serialize identically") {
  const ProblemSpec spec(JacobiParams::parse("3/2", "1/2"), 2.0, 16);
  CHECK(dump(branch_to_json(short_branch(spec), spec)) == dump(branch_to_json(short_branch(spec), spec)));
}

TEST_CASE("sphere and linearization JSON") {
  const auto ctx = params_from_sphere(3, 1, 0).with_focal_dimension(1);
  const Json j = sphere_to_json(ctx, 2, Rational(3));
  CHECK(j["alpha"] == "1/2");
  CHECK(j["bifurcation_points"][0]["lambda"] == "3/2");
  CHECK(j["bifurcation_points"][1]["lambda"] == "4");
  CHECK(j["q_f"] == "inf");

  const auto table = linearization_coeffs(2, JacobiParams::parse("0", "0"));
  const auto report = sign_classification(table);
  const Json l = linearization_to_json(table, &report);
  CHECK(l["coeffs_exact"][4] == "18/35");
  CHECK(l["classification"][1] == "zero");
  CHECK(l["discrepancies"].empty());
}
