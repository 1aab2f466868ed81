#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace nocsit {

using Rational = boost::multiprecision::cpp_rational;

/// `p/q` in lowest terms; integers print without a denominator unless
/// `always_fraction` is set.
std::string to_string(const Rational& r, bool always_fraction = false);

/// Accepts `p`, `p/q`, with optional sign. Throws FormatError.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
Rational approximate(double x, std::int64_t max_den);

} // namespace nocsit
