// Exact arithmetic in Z[v, v^-1].
#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qforge {

using Int = mpz_class;

// Integer Laurent polynomials in the single variable v.  Zero coefficients
// are never stored; the zero polynomial has an empty term map.
class LaurentPoly {
public:
  using TermMap = std::map<std::int64_t, Int>;

  LaurentPoly() = default;
  LaurentPoly(long c) { set_term(0, Int(c)); }
  LaurentPoly(const Int& c) { set_term(0, c); }

  static LaurentPoly monomial(std::int64_t exp, Int coeff = Int(1)) {
    LaurentPoly p;
    p.set_term(exp, std::move(coeff));
    return p;
  }
  static LaurentPoly v(std::int64_t exp = 1) { return monomial(exp); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const { return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1; }

  std::int64_t min_exp() const {
    check_nonzero();
    return terms_.begin()->first;
  }
  std::int64_t max_exp() const {
    check_nonzero();
    return terms_.rbegin()->first;
  }
  const Int& leading_coeff() const {
    check_nonzero();
    return terms_.rbegin()->second;
  }
  const Int& trailing_coeff() const {
    check_nonzero();
    return terms_.begin()->second;
  }
  Int coeff(std::int64_t exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? Int(0) : it->second;
  }

  void set_term(std::int64_t exp, Int coeff) {
    check_exp(exp);
    if (coeff == 0)
      terms_.erase(exp);
    else
      terms_[exp] = std::move(coeff);
  }
  void add_term(std::int64_t exp, const Int& coeff) {
    check_exp(exp);
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
      if (coeff != 0) terms_.emplace(exp, coeff);
      return;
    }
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }

  LaurentPoly operator-() const {
    LaurentPoly r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
  friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ < b.terms_; }

  // Multiply by v^k.
  LaurentPoly shifted(std::int64_t k) const {
    LaurentPoly r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e + k, c);
    if (!r.terms_.empty()) check_exp(r.terms_.begin()->first), check_exp(r.terms_.rbegin()->first);
    return r;
  }

  // The coefficient involution v -> v^-1.
  LaurentPoly bar() const {
    LaurentPoly r;
    for (auto& [e, c] : terms_) r.terms_.emplace(-e, c);
    return r;
  }

  LaurentPoly pow(unsigned n) const {
    LaurentPoly r(1);
    LaurentPoly base = *this;
    for (; n; n >>= 1) {
      if (n & 1) r *= base;
      if (n > 1) base *= base;
    }
    return r;
  }

  // gcd of all integer coefficients (nonnegative); 0 for the zero polynomial.
  Int content() const {
    Int g = 0;
    for (auto& [e, c] : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
  }

  LaurentPoly divided_by_int(const Int& d) const {
    LaurentPoly r;
    for (auto& [e, c] : terms_) {
      if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t()))
        throw std::runtime_error("LaurentPoly: inexact integer division");
      r.terms_.emplace(e, c / d);
    }
    return r;
  }

  // Exact division; throws if the quotient is not a Laurent polynomial.
  friend LaurentPoly exact_div(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw std::runtime_error("LaurentPoly: division by zero");
    if (a.is_zero()) return {};
    LaurentPoly rem = a;
    LaurentPoly quot;
    const std::int64_t eb = b.max_exp();
    const Int& lb = b.leading_coeff();
    // If a = q*b then the exponents of q lie in [a.min-b.min, a.max-b.max].
    const std::int64_t qmin = a.min_exp() - b.min_exp();
    while (!rem.is_zero()) {
      std::int64_t ea = rem.max_exp();
      const Int& la = rem.leading_coeff();
      if (ea - eb < qmin || !mpz_divisible_p(la.get_mpz_t(), lb.get_mpz_t()))
        throw std::runtime_error("LaurentPoly: inexact division");
      Int q = la / lb;
      quot.add_term(ea - eb, q);
      rem -= b.shifted(ea - eb) * LaurentPoly(q);
      if (!rem.is_zero() && rem.max_exp() >= ea)
        throw std::runtime_error("LaurentPoly: division failed to reduce degree");
    }
    return quot;
  }

  friend std::optional<LaurentPoly> try_exact_div(const LaurentPoly& a, const LaurentPoly& b) {
    try {
      return exact_div(a, b);
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
  }

  // Canonical text rendering: terms in increasing exponent order,
  // e.g. "v^-1 + 2 + v^3".
  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto& [e, c] : terms_) {
      Int a = c < 0 ? Int(-c) : c;
      bool neg = c < 0;
      std::string term;
      if (e == 0) {
        term = a.get_str();
      } else {
        if (a != 1) term = a.get_str() + "*";
        term += (e == 1) ? "v" : "v^" + std::to_string(e);
      }
      if (first) {
        out = (neg ? "-" : "") + term;
        first = false;
      } else {
        out += (neg ? " - " : " + ") + term;
      }
    }
    return out;
  }

  static LaurentPoly parse(const std::string& text);

private:
  TermMap terms_;

  void check_nonzero() const {
    if (terms_.empty()) throw std::runtime_error("LaurentPoly: zero polynomial has no degree");
  }
  static void check_exp(std::int64_t e) {
    // Desk-scale degrees are tiny; anything near the representable edge is a bug.
    if (e > (std::int64_t(1) << 40) || e < -(std::int64_t(1) << 40))
      throw std::overflow_error("LaurentPoly: exponent overflow");
  }
};

inline LaurentPoly LaurentPoly::parse(const std::string& text) {
  LaurentPoly out;
  size_t pos = 0;
  auto skip_ws = [&] { while (pos < text.size() && text[pos] == ' ') ++pos; };
  skip_ws();
  if (text.compare(pos, 1, "0") == 0 && pos + 1 >= text.size()) return out;
  bool first = true;
  while (pos < text.size()) {
    skip_ws();
    int sign = 1;
    if (!first || text[pos] == '-' || text[pos] == '+') {
      if (pos >= text.size()) break;
      if (text[pos] == '-') sign = -1;
      else if (text[pos] != '+') throw std::runtime_error("LaurentPoly::parse: expected sign");
      ++pos;
      skip_ws();
    }
    first = false;
    std::string digits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) digits += text[pos++];
    Int coeff = digits.empty() ? Int(1) : Int(digits);
    if (pos < text.size() && text[pos] == '*') ++pos;
    std::int64_t exp = 0;
    if (pos < text.size() && text[pos] == 'v') {
      ++pos;
      exp = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        bool eneg = false;
        if (pos < text.size() && text[pos] == '-') eneg = true, ++pos;
        std::string ed;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ed += text[pos++];
        if (ed.empty()) throw std::runtime_error("LaurentPoly::parse: bad exponent");
        exp = std::stoll(ed);
        if (eneg) exp = -exp;
      }
    } else if (digits.empty()) {
      throw std::runtime_error("LaurentPoly::parse: expected term");
    }
    out.add_term(exp, sign * coeff);
    skip_ws();
  }
  return out;
}

// --- polynomial gcd over Z[v], via a primitive pseudo-remainder sequence ---

namespace detail {

// Both arguments ordinary polynomials (min_exp >= 0), b nonzero,
// deg a >= deg b.  Returns prem(a, b).
inline LaurentPoly pseudo_rem(LaurentPoly a, const LaurentPoly& b) {
  const std::int64_t db = b.max_exp();
  const Int& lb = b.leading_coeff();
  while (!a.is_zero() && a.max_exp() >= db) {
    std::int64_t da = a.max_exp();
    Int la = a.leading_coeff();
    a = a * LaurentPoly(lb) - b.shifted(da - db) * LaurentPoly(la);
    if (!a.is_zero() && a.max_exp() >= da) throw std::logic_error("pseudo_rem: no progress");
  }
  return a;
}

inline LaurentPoly primitive_part(const LaurentPoly& p) {
  if (p.is_zero()) return p;
  LaurentPoly q = p.shifted(-p.min_exp());
  Int c = q.content();
  if (q.leading_coeff() < 0) c = -c;
  return q.divided_by_int(c);
}

} // namespace detail

// gcd in Z[v, v^-1], canonicalized: min exponent 0, positive leading
// coefficient, primitive.  Unit factors (+- v^k) are quotiented away.
inline LaurentPoly laurent_gcd(const LaurentPoly& a0, const LaurentPoly& b0) {
  if (a0.is_zero()) return b0.is_zero() ? LaurentPoly(1) : detail::primitive_part(b0);
  if (b0.is_zero()) return detail::primitive_part(a0);
  LaurentPoly a = detail::primitive_part(a0);
  LaurentPoly b = detail::primitive_part(b0);
  if (a.max_exp() < b.max_exp()) std::swap(a, b);
  while (!b.is_zero() && b.max_exp() > 0) {
    LaurentPoly r = detail::pseudo_rem(a, b);
    a = b;
    b = r.is_zero() ? r : detail::primitive_part(r);
  }
  if (!b.is_zero()) return LaurentPoly(1); // nonzero constant: coprime as primitives
  return a;
}

// --- quantum integers ---

// [s] = (v^s - v^-s) / (v - v^-1); balanced, so [-s] = -[s].
inline LaurentPoly qint(std::int64_t s) {
  LaurentPoly p;
  std::int64_t n = s < 0 ? -s : s;
  for (std::int64_t k = 0; k < n; ++k) p.add_term(n - 1 - 2 * k, 1);
  if (s < 0) return -p;
  return p;
}

inline LaurentPoly qfact(std::int64_t s) {
  if (s < 0) throw std::invalid_argument("qfact: negative argument");
  LaurentPoly p(1);
  for (std::int64_t k = 2; k <= s; ++k) p *= qint(k);
  return p;
}

// Quantum binomial [s]! / ([t]! [s-t]!), 0 <= t <= s.  The division is
// provably exact; failure signals an arithmetic bug.
inline LaurentPoly qbinom(std::int64_t s, std::int64_t t) {
  if (t < 0 || t > s) throw std::invalid_argument("qbinom: requires 0 <= t <= s");
  LaurentPoly num(1);
  for (std::int64_t k = 0; k < t; ++k) num *= qint(s - k);
  return exact_div(num, qfact(t));
}

} // namespace qforge
