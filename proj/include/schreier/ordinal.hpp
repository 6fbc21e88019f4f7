#pragma once

// Ordinals below epsilon_0 in hereditary Cantor normal form.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "schreier/error.hpp"

namespace schreier {

struct OrdinalTerm;

class Ordinal {
 public:
  Ordinal() = default;  // zero

  static Ordinal finite(std::uint64_t n);
  static Ordinal omega();
  // omega^e * c; c = 0 gives zero
  static Ordinal power(const Ordinal& e, std::uint64_t c = 1);
  // Validates CNF: exponents strictly decreasing, coefficients >= 1.
  static Ordinal from_terms(std::vector<OrdinalTerm> terms);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  std::uint64_t finite_value() const;  // requires is_finite()
  bool is_successor() const;
  bool is_limit() const;
  Ordinal predecessor() const;  // requires is_successor()
  Ordinal successor() const;

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  std::uint64_t coefficient = 1;
};

enum class OrdinalKind { zero, successor, limit };

inline std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const auto& x = a.terms_;
  const auto& y = b.terms_;
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = x[i].exponent <=> y[i].exponent;
    if (c != 0) return c;
    if (x[i].coefficient != y[i].coefficient) return x[i].coefficient <=> y[i].coefficient;
  }
  return x.size() <=> y.size();
}

inline bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

inline std::strong_ordering compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

inline Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back({Ordinal{}, n});
  return o;
}

inline Ordinal Ordinal::omega() { return power(finite(1)); }

inline Ordinal Ordinal::power(const Ordinal& e, std::uint64_t c) {
  Ordinal o;
  if (c > 0) o.terms_.push_back({e, c});
  return o;
}

inline Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    require(terms[i].coefficient >= 1, ErrorKind::invalid_argument, "CNF coefficient must be >= 1");
    if (i > 0)
      require(terms[i].exponent < terms[i - 1].exponent, ErrorKind::invalid_argument,
              "CNF exponents must be strictly decreasing");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

inline bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline std::uint64_t Ordinal::finite_value() const {
  require(is_finite(), ErrorKind::invalid_argument, "ordinal is not finite");
  return terms_.empty() ? 0 : terms_[0].coefficient;
}

inline bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exponent.is_zero(); }

inline bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exponent.is_zero(); }

inline Ordinal Ordinal::predecessor() const {
  require(is_successor(), ErrorKind::invalid_argument, "ordinal has no predecessor: " + to_string());
  Ordinal o = *this;
  if (--o.terms_.back().coefficient == 0) o.terms_.pop_back();
  return o;
}

inline Ordinal Ordinal::successor() const {
  Ordinal o = *this;
  if (o.is_successor())
    ++o.terms_.back().coefficient;
  else
    o.terms_.push_back({Ordinal{}, 1});
  return o;
}

inline OrdinalKind classify(const Ordinal& a) {
  if (a.is_zero()) return OrdinalKind::zero;
  return a.is_successor() ? OrdinalKind::successor : OrdinalKind::limit;
}

inline Ordinal ordinal_sum(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const auto& bt = b.terms();
  const Ordinal& lead = bt.front().exponent;
  std::vector<OrdinalTerm> out;
  for (const auto& t : a.terms()) {
    if (t.exponent > lead) {
      out.push_back(t);
    } else {
      if (t.exponent == lead) out.push_back({lead, t.coefficient});
      break;
    }
  }
  if (!out.empty() && out.back().exponent == lead) {
    out.back().coefficient += bt.front().coefficient;
    out.insert(out.end(), bt.begin() + 1, bt.end());
  } else {
    out.insert(out.end(), bt.begin(), bt.end());
  }
  return Ordinal::from_terms(std::move(out));
}

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return ordinal_sum(a, b); }

// Canonical xi[n]: (g + w^(b+1))[n] = g + w^b * n, (g + w^l)[n] = g + w^(l[n]).
inline Ordinal fundamental_sequence(const Ordinal& xi, std::uint64_t n) {
  require(xi.is_limit(), ErrorKind::not_limit, "fundamental sequence needs a limit ordinal, got " + xi.to_string());
  require(n >= 1, ErrorKind::invalid_argument, "fundamental sequence index must be >= 1");
  std::vector<OrdinalTerm> head = xi.terms();
  OrdinalTerm last = head.back();
  head.pop_back();
  if (last.coefficient > 1) head.push_back({last.exponent, last.coefficient - 1});
  Ordinal g = Ordinal::from_terms(std::move(head));
  const Ordinal& e = last.exponent;
  if (e.is_successor()) return g + Ordinal::power(e.predecessor(), n);
  return g + Ordinal::power(fundamental_sequence(e, n));
}

namespace detail {

inline bool needs_parens(const Ordinal& e) {
  if (e.is_finite()) return false;
  return !(e.terms().size() == 1 && e.terms()[0].coefficient == 1 && e.terms()[0].exponent == Ordinal::finite(1));
}

}  // namespace detail

inline std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i) s += "+";
    if (t.exponent.is_zero()) {
      s += std::to_string(t.coefficient);
      continue;
    }
    s += "w";
    if (!(t.exponent == finite(1))) {
      s += "^";
      if (detail::needs_parens(t.exponent))
        s += "(" + t.exponent.to_string() + ")";
      else
        s += t.exponent.to_string();
    }
    if (t.coefficient > 1) s += "*" + std::to_string(t.coefficient);
  }
  return s;
}

namespace detail {

// ordinal := term ('+' term)* ; term := atom ('*' nat)? | nat
// atom := 'w' ('^' expo)? ; expo := nat | 'w' ('^' expo)? | '(' ordinal ')'
class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view src) : s_(src) {}

  Ordinal parse() {
    skip();
    Ordinal o = ordinal();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return o;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorKind::parse, "ordinal '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at_omega() {
    skip();
    if (s_.substr(pos_, 5) == "omega") return true;
    if (s_.substr(pos_, 2) == "\xCF\x89") return true;  // UTF-8 omega
    return pos_ < s_.size() && (s_[pos_] == 'w' || s_[pos_] == 'W');
  }
  void eat_omega() {
    if (s_.substr(pos_, 5) == "omega")
      pos_ += 5;
    else if (s_.substr(pos_, 2) == "\xCF\x89")
      pos_ += 2;
    else
      ++pos_;
  }
  bool at_digit() {
    skip();
    return pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9';
  }
  std::uint64_t nat() {
    if (!at_digit()) error("expected a natural number");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
      if (v > (UINT64_MAX - 9) / 10) error("number too large");
      v = v * 10 + static_cast<std::uint64_t>(s_[pos_++] - '0');
    }
    return v;
  }
  Ordinal ordinal() {
    Ordinal o = term();
    while (eat('+')) o = o + term();
    return o;
  }
  Ordinal term() {
    if (at_digit()) return Ordinal::finite(nat());
    if (!at_omega()) error("expected 'w' or a number");
    eat_omega();
    Ordinal e = Ordinal::finite(1);
    if (eat('^')) e = expo();
    std::uint64_t c = 1;
    if (eat('*')) c = nat();
    return Ordinal::power(e, c);
  }
  Ordinal expo() {
    if (at_digit()) return Ordinal::finite(nat());
    if (eat('(')) {
      Ordinal o = ordinal();
      if (!eat(')')) error("expected ')'");
      return o;
    }
    if (!at_omega()) error("expected exponent");
    eat_omega();
    Ordinal e = Ordinal::finite(1);
    if (eat('^')) e = expo();
    return Ordinal::power(e);
  }
};

}  // namespace detail

inline Ordinal parse_ordinal(std::string_view s) { return detail::OrdinalParser(s).parse(); }

}  // namespace schreier
