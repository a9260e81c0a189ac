#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace brd {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Parses "p/q", "p" or a finite decimal such as "7.4". Throws InvalidInput.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form with q > 0 and gcd(p, q) = 1.
std::string to_string(const Rational& value);

Integer floor(const Rational& value);
Integer ceil(const Rational& value);

// floor(sqrt(value)) for value >= 0.
Integer isqrt_floor(const Rational& value);

// Returns true and sets root when value is a perfect cube of a non-negative integer.
bool integer_cube_root(const Rational& value, Integer& root);

}  // namespace brd
