// The fraction field Q(v), represented as normalized ratios of integer
// Laurent polynomials.
#pragma once

#include "qforge/laurent.hpp"

#include <utility>

namespace qforge {

// Invariant: den != 0, den has minimal exponent 0 and positive leading
// coefficient, and gcd(num, den) is a unit.  Two representations of the
// same ratio normalize identically, so equality is structural.
class RatFun {
public:
  RatFun() : num_(), den_(1) {}
  RatFun(long c) : num_(c), den_(1) {}
  RatFun(LaurentPoly p) : num_(std::move(p)), den_(1) {}
  RatFun(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }

  // True when the value lies in Z[v, v^-1].
  bool is_laurent() const { return den_.is_one(); }
  LaurentPoly as_laurent() const {
    if (!is_laurent()) throw std::runtime_error("RatFun: not a Laurent polynomial: " + str());
    return num_;
  }

  RatFun operator-() const {
    RatFun r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) {
    return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    return RatFun(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw std::runtime_error("RatFun: division by zero");
    return RatFun(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
  RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

  friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }
  friend bool operator<(const RatFun& a, const RatFun& b) {
    if (a.num_ != b.num_) return a.num_ < b.num_;
    return a.den_ < b.den_;
  }

  RatFun bar() const { return RatFun(num_.bar(), den_.bar()); }

  std::string str() const {
    if (den_.is_one()) return num_.str();
    return "(" + num_.str() + ") / (" + den_.str() + ")";
  }

  // Power-series data of the expansion at v = infinity, i.e. in powers
  // of u = v^-1.  `lowest_u_exp` may be negative (a pole at infinity,
  // meaning positive powers of v occur).  coeffs[k] is the coefficient
  // of u^(lowest_u_exp + k), exact rationals, up to `order` terms.
  struct SeriesAtInfinity {
    std::int64_t lowest_u_exp = 0;
    std::vector<mpq_class> coeffs;
  };
  SeriesAtInfinity series_at_infinity(std::size_t order) const {
    SeriesAtInfinity out;
    if (is_zero()) {
      out.coeffs.assign(order, mpq_class(0));
      return out;
    }
    // In u = v^-1 the numerator and denominator become bar(num), bar(den).
    LaurentPoly a = num_.bar();
    LaurentPoly b = den_.bar();
    const std::int64_t shift = a.min_exp() - b.min_exp();
    a = a.shifted(-a.min_exp());
    b = b.shifted(-b.min_exp());
    out.lowest_u_exp = shift;
    // a(u)/b(u) with b(0) != 0: standard series division.
    mpq_class b0(b.trailing_coeff());
    std::vector<mpq_class> c;
    c.reserve(order);
    for (std::size_t k = 0; k < order; ++k) {
      mpq_class s(a.coeff(static_cast<std::int64_t>(k)));
      for (std::size_t j = 0; j < k; ++j)
        s -= c[j] * mpq_class(b.coeff(static_cast<std::int64_t>(k - j)));
      s /= b0;
      s.canonicalize();
      c.push_back(s);
    }
    out.coeffs = std::move(c);
    return out;
  }

private:
  LaurentPoly num_;
  LaurentPoly den_;

  void normalize() {
    if (den_.is_zero()) throw std::runtime_error("RatFun: zero denominator");
    if (num_.is_zero()) {
      den_ = LaurentPoly(1);
      return;
    }
    LaurentPoly g = laurent_gcd(num_, den_);
    if (!g.is_one()) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
    Int cn = num_.content();
    Int cd = den_.content();
    Int c;
    mpz_gcd(c.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (c > 1) {
      num_ = num_.divided_by_int(c);
      den_ = den_.divided_by_int(c);
    }
    // Unit normalization: den min exponent 0, positive leading coefficient.
    std::int64_t k = den_.min_exp();
    den_ = den_.shifted(-k);
    num_ = num_.shifted(-k);
    if (den_.leading_coeff() < 0) {
      den_ = -den_;
      num_ = -num_;
    }
  }
};

inline RatFun qint_r(std::int64_t s) { return RatFun(qint(s)); }
inline RatFun v_pow(std::int64_t e) { return RatFun(LaurentPoly::v(e)); }

} // namespace qforge
