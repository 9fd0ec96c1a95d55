#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace orbitforge {

/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" with q > 0, always including the denominator ("5/1").
std::string to_fraction_string(const Rational& r);

/// Parses "p/q" or an integer "p". Throws ParseError on malformed input.
Rational parse_fraction(std::string_view text);

/// True when text has the shape produced by to_fraction_string.
bool looks_like_fraction(std::string_view text);

double to_double(const Rational& r);

}  // namespace orbitforge
