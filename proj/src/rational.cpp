#include "supdiff/rational.hpp"

#include <stdexcept>

namespace supdiff {

Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) {
    throw std::invalid_argument("rational with zero denominator");
  }
  // Division through mpq canonicalizes sign and gcd.
  return Rational(num) / Rational(den);
}

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) {
    return std::nullopt;
  }
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(Int(text));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty()) {
      return std::nullopt;
    }
    return make_rational(Int(num), Int(den));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) {
    return numerator(value).str();
  }
  return numerator(value).str() + "/" + denominator(value).str();
}

}  // namespace supdiff
