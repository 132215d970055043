#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace jbif {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact rational value of a finite double (every double is a dyadic rational).
Rational exact_from_double(double x);

/// Parses "3", "-7/2", "0.3", "1.5e-2" exactly. Returns nullopt on malformed input.
std::optional<Rational> parse_rational(std::string_view text);

/// "p/q" or "p" when the denominator is one.
std::string to_string(const Rational& r);

inline int sign(const Rational& r) { return r.sign(); }

}  // namespace jbif
