#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <vector>

namespace supdiff {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Builds num/den in canonical form (gcd 1, positive denominator).
/// Throws std::invalid_argument on a zero denominator.
Rational make_rational(const Int& num, const Int& den);

/// Parses "3", "-3", "3/4" or "-3/4". Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

/// Renders as "p" or "p/q" with q > 1.
std::string to_string(const Rational& value);

}  // namespace supdiff
