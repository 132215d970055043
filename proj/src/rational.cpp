#include "jbif/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace jbif {

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("exact_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, |mantissa| in [0.5, 1)
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r(scaled);
  BigInt two_pow = BigInt(1) << std::abs(exponent);
  if (exponent >= 0) return r * Rational(two_pow);
  return r / Rational(two_pow);
}

namespace {

std::optional<BigInt> parse_integer(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) return std::nullopt;
  BigInt value = 0;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos]))) return std::nullopt;
    value = value * 10 + (s[pos] - '0');
  }
  return negative ? BigInt(-value) : value;
}

std::optional<Rational> parse_decimal(std::string_view s) {
  std::string_view mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    auto exp_value = parse_integer(s.substr(e + 1));
    if (!exp_value || abs(*exp_value) > 4000) return std::nullopt;
    exponent = exp_value->convert_to<long>();
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < mantissa.size(); ++i) {
    char ch = mantissa[i];
    if (ch == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
    } else {
      if ((ch == '+' || ch == '-') && i != 0) return std::nullopt;
      digits.push_back(ch);
      if (seen_point && std::isdigit(static_cast<unsigned char>(ch))) ++fraction_digits;
    }
  }
  auto integer = parse_integer(digits);
  if (!integer) return std::nullopt;
  exponent -= fraction_digits;
  BigInt ten_pow = pow(BigInt(10), static_cast<unsigned>(std::abs(exponent)));
  Rational r(*integer);
  return exponent >= 0 ? Rational(r * Rational(ten_pow)) : Rational(r / Rational(ten_pow));
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace jbif
