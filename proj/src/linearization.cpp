#include "jbif/linearization.hpp"

#include <algorithm>
#include <cmath>

#include "jbif/error.hpp"

namespace jbif {

namespace {

// Rule exact for P_k^2 P_i with i <= 2k (degree 4k). This also covers the cube integral.
int linearization_rule_order(int k) { return default_rule_order(4 * k); }

Rational exact_integral_ratio(const ExactPolynomial& p, const std::vector<Rational>& nu) {
  Rational sum = 0;
  for (std::size_t j = 0; j < p.coeffs().size(); ++j) sum += p.coeffs()[j] * nu[j];
  return sum;
}

SignClass classify(double value, double band) {
  if (std::abs(value) <= band) return SignClass::zero;
  return value > 0 ? SignClass::positive : SignClass::negative;
}

SignClass classify(const Rational& value) {
  return static_cast<SignClass>(value.sign());
}

}  // namespace

std::string_view to_string(SignClass s) {
  switch (s) {
    case SignClass::negative: return "negative";
    case SignClass::zero: return "zero";
    case SignClass::positive: return "positive";
  }
  return "zero";
}

LinearizationTable linearization_coeffs(int k, const JacobiParams& params) {
  if (k < 0) throw Error(ErrorCode::negative_degree, "k must be >= 0");
  const int top = 2 * k;
  const auto rule = cached_rule(params, linearization_rule_order(k));

  std::vector<double> num(top + 1, 0.0);
  std::vector<double> norms(top + 1, 0.0);
  double i3 = 0.0;
  std::vector<double> values(top + 1);
  for (std::size_t m = 0; m < rule->nodes.size(); ++m) {
    eval_jacobi_all(params, rule->nodes[m], values);
    const double w = rule->weights[m];
    const double pk = values[k];
    for (int i = 0; i <= top; ++i) {
      num[i] += w * pk * pk * values[i];
      norms[i] += w * values[i] * values[i];
    }
    i3 += w * pk * pk * pk;
  }

  LinearizationTable table{k, params, std::vector<double>(top + 1), std::nullopt, norms[k], i3,
                           std::nullopt, std::nullopt};
  for (int i = 0; i <= top; ++i) table.coeffs[i] = num[i] / norms[i];

  if (params.has_exact()) {
    const auto nu = normalized_moments(params, 4 * k);
    std::vector<ExactPolynomial> basis;
    basis.reserve(top + 1);
    for (int i = 0; i <= top; ++i) basis.push_back(exact_coeffs(i, params));
    const ExactPolynomial square = basis[k] * basis[k];
    std::vector<Rational> exact(top + 1);
    for (int i = 0; i <= top; ++i) {
      const Rational h_ratio = exact_integral_ratio(basis[i] * basis[i], nu);
      exact[i] = exact_integral_ratio(square * basis[i], nu) / h_ratio;
      if (i == k) table.h_k_ratio = h_ratio;
    }
    table.i3_ratio = exact_integral_ratio(square * basis[k], nu);
    table.exact_coeffs = std::move(exact);
  }
  return table;
}

double cube_integral(int k, const JacobiParams& params) {
  if (k < 0) throw Error(ErrorCode::negative_degree, "k must be >= 0");
  const auto rule = cached_rule(params, default_rule_order(3 * k));
  double sum = 0.0;
  for (std::size_t m = 0; m < rule->nodes.size(); ++m) {
    const double p = eval_jacobi(k, params, rule->nodes[m]);
    sum += rule->weights[m] * p * p * p;
  }
  return sum;
}

WeightedIntegral cube_integral_exact(int k, const JacobiParams& params) {
  if (k < 0) throw Error(ErrorCode::negative_degree, "k must be >= 0");
  const ExactPolynomial p = exact_coeffs(k, params);
  return exact_weighted_integral(p * p * p, params);
}

std::optional<SignClass> expected_sign(int k, int i, const JacobiParams& params) {
  if (k < 1 || i < 0 || i > 2 * k || !params.gasper_hypotheses()) return std::nullopt;
  if (params.symmetric()) return (i % 2 == 0) ? SignClass::positive : SignClass::zero;
  return SignClass::positive;
}

SignReport sign_classification(int k, const JacobiParams& params) {
  if (!params.gasper_hypotheses()) {
    throw Error(ErrorCode::hypothesis_violation, "sign classification needs alpha >= beta and alpha+beta+1 > 0");
  }
  if (k < 1) throw Error(ErrorCode::invalid_argument, "sign classification needs k >= 1");
  return sign_classification(linearization_coeffs(k, params));
}

SignReport sign_classification(const LinearizationTable& table) {
  const JacobiParams& params = table.params;
  if (!params.gasper_hypotheses()) {
    throw Error(ErrorCode::hypothesis_violation, "sign classification needs alpha >= beta and alpha+beta+1 > 0");
  }
  const int k = table.k;
  SignReport report;
  report.k = k;
  double largest = 0.0;
  for (double c : table.coeffs) largest = std::max(largest, std::abs(c));
  const double band = 1e-12 * largest;

  std::vector<SignClass> floating;
  for (double c : table.coeffs) floating.push_back(classify(c, band));

  if (table.exact_coeffs) {
    report.exact = true;
    for (std::size_t i = 0; i < table.exact_coeffs->size(); ++i) {
      report.classes.push_back(classify((*table.exact_coeffs)[i]));
      if (report.classes.back() != floating[i]) report.float_exact_mismatches.push_back(static_cast<int>(i));
    }
  } else {
    report.classes = floating;
  }

  for (int i = 0; i <= 2 * k; ++i) {
    if (auto expected = expected_sign(k, i, params); expected && *expected != report.classes[i]) {
      report.discrepancies.push_back({i, *expected, report.classes[i]});
    }
  }

  if (table.i3_ratio) {
    report.cube_sign = classify(*table.i3_ratio);
  } else {
    report.cube_sign = classify(table.i3, 1e-12 * std::pow(table.h_k, 1.5));
  }
  return report;
}

// --- Gasper quartic ---

namespace {

template <typename T>
T quartic_factored(int k, const T& a, const T& J) {
  const T kk(k);
  return (J + 2) * (J + 2) * (J + 2 * kk + 2 * a + 1) * (2 * kk - J - 1) * (2 * J + a + 1) -
         (J + 1) * (J + 1) * (J + 2 * kk + 2 * a) * (2 * kk - J) * (2 * J + a + 3);
}

template <typename T>
std::vector<T> quartic_expanded(int k, const T& a) {
  const T kk(k);
  return {
      4 * (kk + 3 * kk * a + 3 * a + 1) * (kk - 1) + 4 * a * kk + 4 * a * a * (3 * kk - 2),
      8 * kk * (kk + a) * (a + 2) - 14 * a * a - 38 * a - 20,
      8 * kk * (kk + a) - 6 * a * a - 38 * a - 34,
      -12 * (a + 2),
      T(-6),
  };
}

template <typename T>
T horner(const std::vector<T>& c, const T& x) {
  T acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

void check_quartic_args(int k, bool a_positive) {
  if (k < 2) throw Error(ErrorCode::k_too_small, "the quartic is defined for k >= 2");
  if (!a_positive) throw Error(ErrorCode::hypothesis_violation, "a = alpha + beta + 1 must be > 0");
}

}  // namespace

GasperQuartic gasper_quartic(int k, double a) {
  check_quartic_args(k, a > 0.0);
  GasperQuartic gq;
  gq.k_ = k;
  gq.a_ = a;
  gq.coeffs_ = quartic_expanded<double>(k, a);
  return gq;
}

GasperQuartic gasper_quartic(int k, const Rational& a) {
  check_quartic_args(k, a > 0);
  GasperQuartic gq = gasper_quartic(k, to_double(a));
  gq.exact_a_ = a;
  gq.exact_ = quartic_expanded<Rational>(k, a);
  return gq;
}

double GasperQuartic::factored(double J) const { return quartic_factored<double>(k_, a_, J); }

double GasperQuartic::expanded(double J) const { return horner(coeffs_, J); }

Rational GasperQuartic::factored_exact(const Rational& J) const {
  if (!exact_a_) throw Error(ErrorCode::irrational_params, "quartic built from a floating a");
  return quartic_factored<Rational>(k_, *exact_a_, J);
}

Rational GasperQuartic::expanded_exact(const Rational& J) const {
  if (!exact_) throw Error(ErrorCode::irrational_params, "quartic built from a floating a");
  return horner(*exact_, J);
}

QuarticStructure quartic_sign_structure(const GasperQuartic& gq) {
  const auto& c = gq.coefficients();
  auto fail = [](const char* what) { throw Error(ErrorCode::structure_violation, what); };

  if (!(c[4] < 0 && c[3] < 0)) fail("J^4 and J^3 coefficients must be negative");
  if (!(c[1] > 0 && c[0] > 0)) fail("J^1 and J^0 coefficients must be positive");

  QuarticStructure out;
  int previous = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    const int s = (*it > 0) - (*it < 0);
    if (s == 0) continue;
    if (previous != 0 && s != previous) ++out.coefficient_sign_changes;
    previous = s;
  }
  if (out.coefficient_sign_changes != 1) fail("coefficient sequence must change sign exactly once");

  out.q_at_zero = gq.expanded(0.0);
  if (!(out.q_at_zero > 0)) fail("Q(0) must be positive");

  double lo = 0.0;
  double hi = 1.0;
  while (gq.expanded(hi) >= 0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) fail("no positive root found");
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (gq.expanded(mid) > 0 ? lo : hi) = mid;
  }
  out.x0 = 0.5 * (lo + hi);

  constexpr int samples = 200;
  for (int j = 1; j <= samples; ++j) {
    if (!(gq.expanded(out.x0 * j / (samples + 1.0)) > 0)) fail("Q must be positive on (0, x0)");
    if (!(gq.expanded(out.x0 + 4.0 * gq.k() * j / samples) < 0)) fail("Q must be negative beyond x0");
  }
  return out;
}

}  // namespace jbif
