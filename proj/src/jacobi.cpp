#include "jbif/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "jbif/error.hpp"

namespace jbif {

// --- JacobiParams ---

JacobiParams::JacobiParams(double alpha, double beta) : alpha_(alpha), beta_(beta) { validate(); }

JacobiParams::JacobiParams(const Rational& alpha, const Rational& beta)
    : alpha_(to_double(alpha)), beta_(to_double(beta)), exact_(std::make_pair(alpha, beta)) {
  if (alpha <= -1 || beta <= -1) {
    throw Error(ErrorCode::non_integrable_weight, "Jacobi exponents must exceed -1");
  }
  validate();
}

JacobiParams JacobiParams::parse(std::string_view alpha, std::string_view beta) {
  auto a = parse_rational(alpha);
  auto b = parse_rational(beta);
  if (!a || !b) throw Error(ErrorCode::invalid_argument, "cannot parse Jacobi exponents");
  return JacobiParams(*a, *b);
}

void JacobiParams::validate() const {
  if (!std::isfinite(alpha_) || !std::isfinite(beta_) || alpha_ <= -1.0 || beta_ <= -1.0) {
    throw Error(ErrorCode::non_integrable_weight, "Jacobi exponents must exceed -1");
  }
}

const Rational& JacobiParams::exact_alpha() const {
  if (!exact_) throw Error(ErrorCode::irrational_params, "no exact mirror for alpha");
  return exact_->first;
}

const Rational& JacobiParams::exact_beta() const {
  if (!exact_) throw Error(ErrorCode::irrational_params, "no exact mirror for beta");
  return exact_->second;
}

bool JacobiParams::symmetric() const noexcept {
  if (exact_) return exact_->first == exact_->second;
  return alpha_ == beta_;
}

bool JacobiParams::gasper_hypotheses() const noexcept {
  if (exact_) return exact_->first >= exact_->second && exact_->first + exact_->second + 1 > 0;
  return alpha_ >= beta_ && a() > 0.0;
}

// --- ExactPolynomial ---

ExactPolynomial::ExactPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void ExactPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational ExactPolynomial::operator()(const Rational& t) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double ExactPolynomial::eval_exact(double t) const { return to_double((*this)(exact_from_double(t))); }

ExactPolynomial ExactPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = coeffs_[j] * static_cast<long>(j);
  return ExactPolynomial(std::move(d));
}

ExactPolynomial operator+(const ExactPolynomial& p, const ExactPolynomial& q) {
  std::vector<Rational> c(std::max(p.coeffs_.size(), q.coeffs_.size()));
  for (std::size_t j = 0; j < p.coeffs_.size(); ++j) c[j] += p.coeffs_[j];
  for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[j] += q.coeffs_[j];
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator-(const ExactPolynomial& p, const ExactPolynomial& q) {
  return p + Rational(-1) * q;
}

ExactPolynomial operator*(const ExactPolynomial& p, const ExactPolynomial& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<Rational> c(p.coeffs_.size() + q.coeffs_.size() - 1);
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
  }
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator*(const Rational& s, const ExactPolynomial& p) {
  std::vector<Rational> c = p.coeffs_;
  for (auto& x : c) x *= s;
  return ExactPolynomial(std::move(c));
}

// --- floating-point evaluation ---

namespace {

void require_degree(int k) {
  if (k < 0) throw Error(ErrorCode::negative_degree, "polynomial degree must be >= 0");
}

}  // namespace

void eval_jacobi_all(const JacobiParams& params, double t, std::span<double> out) {
  if (out.empty()) return;
  const double al = params.alpha();
  const double be = params.beta();
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 0.5 * (al - be) + 0.5 * (al + be + 2.0) * t;
  for (std::size_t n = 2; n < out.size(); ++n) {
    const double nn = static_cast<double>(n);
    const double c = 2.0 * nn + al + be;
    const double a1 = 2.0 * nn * (nn + al + be) * (c - 2.0);
    const double a2 = (c - 1.0) * (al * al - be * be);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (nn + al - 1.0) * (nn + be - 1.0) * c;
    out[n] = ((a2 + a3 * t) * out[n - 1] - a4 * out[n - 2]) / a1;
  }
}

double eval_jacobi(int k, const JacobiParams& params, double t) {
  require_degree(k);
  if (k == 0) return 1.0;
  std::vector<double> values(static_cast<std::size_t>(k) + 1);
  eval_jacobi_all(params, t, values);
  return values.back();
}

double eval_jacobi_derivative(int k, const JacobiParams& params, double t, int order) {
  require_degree(k);
  if (order < 0) throw Error(ErrorCode::invalid_argument, "derivative order must be >= 0");
  if (order == 0) return eval_jacobi(k, params, t);
  if (k < order) return 0.0;
  double factor = 1.0;
  for (int j = 1; j <= order; ++j) factor *= 0.5 * (k + params.alpha() + params.beta() + j);
  const JacobiParams shifted(params.alpha() + order, params.beta() + order);
  return factor * eval_jacobi(k - order, shifted, t);
}

double endpoint_value(int k, const JacobiParams& params, Side side) {
  require_degree(k);
  const double shift = side == Side::plus ? params.alpha() : params.beta();
  double value = 1.0;
  for (int j = 1; j <= k; ++j) value *= (shift + j) / j;
  return (side == Side::minus && k % 2 == 1) ? -value : value;
}

Rational endpoint_value_exact(int k, const JacobiParams& params, Side side) {
  require_degree(k);
  const Rational& shift = side == Side::plus ? params.exact_alpha() : params.exact_beta();
  Rational value = 1;
  for (int j = 1; j <= k; ++j) value *= (shift + j) / Rational(j);
  return (side == Side::minus && k % 2 == 1) ? Rational(-value) : value;
}

// --- exact polynomial algebra ---

ExactPolynomial exact_coeffs(int k, const JacobiParams& params) {
  require_degree(k);
  const Rational& al = params.exact_alpha();
  const Rational& be = params.exact_beta();
  const Rational a = al + be + 1;
  // Monic eigenpolynomial of L for eigenvalue -k(k+a). Matching t^j coefficients:
  //   (k-j)(k+j+a) c_j = -(j+1)(be-al) c_{j+1} - (j+2)(j+1) c_{j+2},
  // and k+j+a > 0 because a > -1.
  std::vector<Rational> c(static_cast<std::size_t>(k) + 1);
  c[k] = 1;
  for (int j = k - 1; j >= 0; --j) {
    Rational rhs = -Rational(j + 1) * (be - al) * c[j + 1];
    if (j + 2 <= k) rhs -= Rational((j + 2) * (j + 1)) * c[j + 2];
    c[j] = rhs / (Rational(k - j) * (Rational(k + j) + a));
  }
  ExactPolynomial monic(std::move(c));
  const Rational scale = endpoint_value_exact(k, params, Side::plus) / monic(Rational(1));
  return scale * monic;
}

ExactPolynomial apply_L(const ExactPolynomial& p, const JacobiParams& params) {
  const Rational& al = params.exact_alpha();
  const Rational& be = params.exact_beta();
  const Rational a = al + be + 1;
  if (p.is_zero()) return {};
  std::vector<Rational> out(p.coeffs().size());
  for (std::size_t jj = 0; jj < p.coeffs().size(); ++jj) {
    const Rational& cj = p.coeffs()[jj];
    if (cj == 0) continue;
    const long j = static_cast<long>(jj);
    out[jj] -= Rational(j) * (Rational(j) + a) * cj;
    if (j >= 1) out[jj - 1] += Rational(j) * (be - al) * cj;
    if (j >= 2) out[jj - 2] += Rational(j * (j - 1)) * cj;
  }
  return ExactPolynomial(std::move(out));
}

std::vector<Rational> normalized_moments(const JacobiParams& params, int jmax) {
  const Rational& al = params.exact_alpha();
  const Rational& be = params.exact_beta();
  std::vector<Rational> nu(static_cast<std::size_t>(std::max(jmax, 0)) + 1);
  nu[0] = 1;
  // Integrating d/dt[(1-t)^(al+1) (1+t)^(be+1) t^j] over [-1,1] gives
  //   (j + al + be + 2) m_{j+1} = j m_{j-1} + (be - al) m_j.
  for (int j = 0; j < jmax; ++j) {
    Rational rhs = (be - al) * nu[j];
    if (j >= 1) rhs += Rational(j) * nu[j - 1];
    nu[j + 1] = rhs / (Rational(j) + al + be + 2);
  }
  return nu;
}

WeightedIntegral exact_weighted_integral(const ExactPolynomial& p, const JacobiParams& params) {
  WeightedIntegral out{Rational(0), weight_integral(params)};
  if (p.is_zero()) return out;
  const auto nu = normalized_moments(params, p.degree());
  for (std::size_t j = 0; j < p.coeffs().size(); ++j) out.ratio += p.coeffs()[j] * nu[j];
  return out;
}

// --- quadrature ---

double weight_integral(const JacobiParams& params) {
  const double al = params.alpha();
  const double be = params.beta();
  return std::exp2(al + be + 1.0) * std::tgamma(al + 1.0) * std::tgamma(be + 1.0) /
         std::tgamma(al + be + 2.0);
}

namespace {

// Gamma(m+al+1) Gamma(m+be+1) / (Gamma(m+al+be+1) m!) for m >= 1, by forward products.
double gamma_ratio(int m, double al, double be) {
  double r = std::tgamma(al + 2.0) * std::tgamma(be + 2.0) / std::tgamma(al + be + 2.0);
  for (int j = 2; j <= m; ++j) r *= (j + al) * (j + be) / ((j + al + be) * j);
  return r;
}

// P_m and P_m' at t.
std::pair<double, double> value_and_slope(int m, const JacobiParams& params, double t) {
  return {eval_jacobi(m, params, t), eval_jacobi_derivative(m, params, t, 1)};
}

}  // namespace

int default_rule_order(int degree) { return (std::max(degree, 0) + 2) / 2 + 2; }

QuadratureRule gauss_jacobi_rule(const JacobiParams& params, int m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "quadrature order must be >= 1");
  const double al = params.alpha();
  const double be = params.beta();

  // Golub-Welsch: symmetric tridiagonal Jacobi matrix of the monic recurrence.
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  diag(0) = (be - al) / (al + be + 2.0);
  for (int n = 1; n < m; ++n) {
    const double s = 2.0 * n + al + be;
    diag(n) = (be * be - al * al) / (s * (s + 2.0));
  }
  for (int n = 1; n < m; ++n) {
    double bn;
    if (n == 1) {
      bn = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + al + be) * (2.0 + al + be) * (3.0 + al + be));
    } else {
      const double s = 2.0 * n + al + be;
      bn = 4.0 * n * (n + al) * (n + be) * (n + al + be) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(n - 1) = std::sqrt(bn);
  }

  std::vector<double> nodes(m);
  if (m == 1) {
    nodes[0] = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::numerical_breakdown, "tridiagonal eigensolver failed");
    }
    for (int i = 0; i < m; ++i) nodes[i] = solver.eigenvalues()(i);
  }

  // Newton polish on P_m, then weights from the Christoffel-number closed form
  //   w_i = 2^(a) Gamma(m+al+1) Gamma(m+be+1) / (Gamma(m+al+be+1) m! (1-x_i^2) P_m'(x_i)^2).
  const double scale = std::exp2(al + be + 1.0) * gamma_ratio(m, al, be);
  std::vector<double> weights(m);
  for (int i = 0; i < m; ++i) {
    double x = nodes[i];
    for (int iter = 0; iter < 3; ++iter) {
      auto [p, dp] = value_and_slope(m, params, x);
      const double step = p / dp;
      const double candidate = x - step;
      if (!(candidate > -1.0 && candidate < 1.0)) break;
      x = candidate;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
    }
    nodes[i] = x;
    const double dp = eval_jacobi_derivative(m, params, x, 1);
    weights[i] = scale / ((1.0 - x) * (1.0 + x) * dp * dp);
  }

  for (int i = 0; i < m; ++i) {
    if (!(weights[i] > 0.0) || !(nodes[i] > -1.0 && nodes[i] < 1.0) ||
        (i > 0 && !(nodes[i] > nodes[i - 1]))) {
      throw Error(ErrorCode::numerical_breakdown, "Gauss-Jacobi rule lost node ordering or positivity");
    }
  }
  return QuadratureRule{std::move(nodes), std::move(weights), m, params};
}

std::shared_ptr<const QuadratureRule> cached_rule(const JacobiParams& params, int m) {
  using Key = std::tuple<double, double, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const QuadratureRule>> cache;
  const Key key{params.alpha(), params.beta(), m};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(gauss_jacobi_rule(params, m));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

double weighted_norm_sq(int k, const JacobiParams& params) {
  require_degree(k);
  const auto rule = cached_rule(params, default_rule_order(2 * k));
  double sum = 0.0;
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    const double p = eval_jacobi(k, params, rule->nodes[i]);
    sum += rule->weights[i] * p * p;
  }
  return sum;
}

double weighted_norm_sq_closed_form(int k, const JacobiParams& params) {
  require_degree(k);
  if (k == 0) return weight_integral(params);
  const double a = params.a();
  return std::exp2(a) / (2.0 * k + a) * gamma_ratio(k, params.alpha(), params.beta());
}

std::vector<double> jacobi_zeros(int k, const JacobiParams& params) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "zeros requested for degree < 1");
  return gauss_jacobi_rule(params, k).nodes;
}

}  // namespace jbif
