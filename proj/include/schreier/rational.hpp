#pragma once

// Exact rationals (GMP) plus the scalar traits the norm engine is templated on.

#include <gmpxx.h>

#include <cmath>
#include <regex>
#include <string>

#include "schreier/error.hpp"

namespace schreier {

using Rational = mpq_class;

inline Rational parse_rational(const std::string& text) {
  static const std::regex re(R"(\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) fail(ErrorKind::parse, "not a rational 'p' or 'p/q': '" + text + "'");
  std::string num = m[1].str();
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  mpz_class p(num, 10);
  mpz_class q(1);
  if (m[2].matched) q = mpz_class(m[2].str(), 10);
  if (q == 0) fail(ErrorKind::parse, "zero denominator in '" + text + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline std::string format_rational(const Rational& r) { return r.get_str(); }

inline Rational rational_pow(const Rational& base, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& q) { return q; }
  static Rational abs(const Rational& q) { return ::abs(q); }
  static Rational to_rational(const Rational& q) { return q; }
  static std::string to_string(const Rational& q) { return format_rational(q); }
  static int sign(const Rational& q) { return sgn(q); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr double tolerance = 1e-9;
  static double from_rational(const Rational& q) { return q.get_d(); }
  static double abs(double q) { return std::fabs(q); }
  static Rational to_rational(double q) { return Rational(q); }
  static std::string to_string(double q) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", q);
    return buf;
  }
  static int sign(double q) { return (q > 0) - (q < 0); }
};

}  // namespace schreier
