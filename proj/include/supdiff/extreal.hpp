#pragma once

#include "supdiff/rational.hpp"

#include <stdexcept>
#include <string>

namespace supdiff {

/// Extended real scalar. Addition follows (+inf) + (-inf) = +inf; ordering is
/// total with -inf < every rational < +inf.
class ExtReal {
 public:
  ExtReal() : kind_(Kind::kFinite), value_(0) {}
  ExtReal(Rational value) : kind_(Kind::kFinite), value_(std::move(value)) {}
  ExtReal(int value) : kind_(Kind::kFinite), value_(value) {}

  static ExtReal plus_infinity() { return ExtReal(Kind::kPlusInf); }
  static ExtReal minus_infinity() { return ExtReal(Kind::kMinusInf); }

  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool is_plus_infinity() const { return kind_ == Kind::kPlusInf; }
  bool is_minus_infinity() const { return kind_ == Kind::kMinusInf; }

  const Rational& finite_value() const {
    if (!is_finite()) throw std::domain_error("extended real is not finite");
    return value_;
  }

  ExtReal operator+(const ExtReal& other) const {
    if (is_plus_infinity() || other.is_plus_infinity()) return plus_infinity();
    if (is_minus_infinity() || other.is_minus_infinity()) return minus_infinity();
    return ExtReal(value_ + other.value_);
  }

  ExtReal operator-() const {
    if (is_plus_infinity()) return minus_infinity();
    if (is_minus_infinity()) return plus_infinity();
    return ExtReal(-value_);
  }

  /// Scaling by a positive rational; sign of infinities is preserved.
  ExtReal scaled_positive(const Rational& factor) const {
    if (factor <= 0) throw std::invalid_argument("scaled_positive requires factor > 0");
    if (!is_finite()) return *this;
    return ExtReal(value_ * factor);
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::kFinite || a.value_ == b.value_;
  }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ == Kind::kMinusInf) return b.kind_ != Kind::kMinusInf;
    if (a.kind_ == Kind::kPlusInf) return false;
    if (b.kind_ == Kind::kPlusInf) return true;
    if (b.kind_ == Kind::kMinusInf) return false;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a < b || a == b; }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return b <= a; }

  std::string str() const {
    if (is_plus_infinity()) return "+inf";
    if (is_minus_infinity()) return "-inf";
    return to_string(value_);
  }

 private:
  enum class Kind { kFinite, kPlusInf, kMinusInf };
  explicit ExtReal(Kind kind) : kind_(kind), value_(0) {}

  Kind kind_;
  Rational value_;
};

}  // namespace supdiff
