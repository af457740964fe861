#pragma once

#include "supdiff/rational.hpp"

#include <cassert>
#include <vector>

namespace supdiff {

using Vec = std::vector<Rational>;

inline Rational dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Rational acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

inline Vec add(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] + b[i];
  }
  return out;
}

inline Vec sub(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] - b[i];
  }
  return out;
}

inline Vec scaled(const Vec& a, const Rational& factor) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] * factor;
  }
  return out;
}

inline Vec zero_vec(int dim) { return Vec(static_cast<std::size_t>(dim), Rational(0)); }

inline bool is_zero(const Vec& a) {
  for (const auto& x : a) {
    if (x != 0) return false;
  }
  return true;
}

/// Rescales to coprime integer coordinates, preserving the direction.
/// The zero vector is returned unchanged.
inline Vec primitive(const Vec& a) {
  Int common_den(1);
  for (const auto& x : a) {
    common_den = lcm(common_den, denominator(x));
  }
  Int content(0);
  std::vector<Int> scaled_coords(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    scaled_coords[i] = numerator(a[i]) * (common_den / denominator(a[i]));
    content = gcd(content, scaled_coords[i]);
  }
  if (content == 0) return a;
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = Rational(scaled_coords[i] / content);
  }
  return out;
}

/// Lexicographic three-way comparison.
inline int compare_lex(const Vec& a, const Vec& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  if (a.size() < b.size()) return -1;
  if (a.size() > b.size()) return 1;
  return 0;
}

struct VecLess {
  bool operator()(const Vec& a, const Vec& b) const { return compare_lex(a, b) < 0; }
};

/// Sum of |a_i|; used for interior-point margins.
inline Rational l1_norm(const Vec& a) {
  Rational acc(0);
  for (const auto& x : a) {
    acc += (x < 0) ? Rational(-x) : x;
  }
  return acc;
}

inline std::string to_string(const Vec& a) {
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(a[i]);
  }
  out += ")";
  return out;
}

}  // namespace supdiff
