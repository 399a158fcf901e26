#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qforge/ratfun.hpp>

#include <random>

using namespace qforge;

namespace {

LaurentPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> nterms(0, 4), expd(-5, 5), coeffd(-9, 9);
  LaurentPoly p;
  int n = nterms(rng);
  for (int k = 0; k < n; ++k) p.add_term(expd(rng), coeffd(rng));
  return p;
}

} // namespace

TEST_CASE("quantum integers") {
  CHECK(qint(0).is_zero());
  LaurentPoly two = LaurentPoly::v(1) + LaurentPoly::v(-1);
  CHECK(qint(2) == two);
  // [a+b] = v^b [a] + v^-a [b]
  CHECK(qint(3) == LaurentPoly::v(1) * qint(2) + LaurentPoly::v(-2) * qint(1));
  for (int s = 0; s <= 6; ++s) CHECK(qint(-s) == -qint(s));
}

TEST_CASE("quantum binomials") {
  CHECK(qbinom(2, 1) == qint(2));
  CHECK(qbinom(2, 0) == LaurentPoly(1));
  CHECK(qbinom(4, 2) == exact_div(qint(4) * qint(3), qint(2) * qint(1)));
  // bar-invariance
  for (int s = 0; s <= 7; ++s)
    for (int t = 0; t <= s; ++t) CHECK(qbinom(s, t).bar() == qbinom(s, t));
}

TEST_CASE("bar involution") {
  CHECK(LaurentPoly::v(2).bar() == LaurentPoly::v(-2));
  for (int s = 1; s <= 6; ++s) CHECK(qint(s).bar() == qint(s));
  // bar(1/(1-v^-2)) = 1/(1-v^2), checked through normalized equality
  LaurentPoly one_m_vm2 = LaurentPoly(1) - LaurentPoly::v(-2);
  LaurentPoly one_m_v2 = LaurentPoly(1) - LaurentPoly::v(2);
  RatFun lhs = RatFun(LaurentPoly(1), one_m_vm2).bar();
  RatFun rhs = RatFun(LaurentPoly(1), one_m_v2);
  CHECK(lhs == rhs);
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    LaurentPoly a = random_poly(rng), b = random_poly(rng);
    CHECK(a.bar().bar() == a);
    CHECK((a * b).bar() == a.bar() * b.bar());
    CHECK((a + b).bar() == a.bar() + b.bar());
  }
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937 rng(11);
  for (int t = 0; t < 100; ++t) {
    LaurentPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("exact division") {
  std::mt19937 rng(13);
  for (int t = 0; t < 60; ++t) {
    LaurentPoly a = random_poly(rng), b = random_poly(rng);
    if (b.is_zero()) continue;
    CHECK(exact_div(a * b, b) == a);
  }
  LaurentPoly p = LaurentPoly::v(1) + LaurentPoly(1);
  CHECK(!try_exact_div(LaurentPoly(1), p).has_value());
}

TEST_CASE("ratfun normalization is canonical") {
  std::mt19937 rng(17);
  int done = 0;
  for (int t = 0; t < 200 && done < 60; ++t) {
    LaurentPoly p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
    if (q.is_zero() || r.is_zero()) continue;
    CHECK(RatFun(p * r, q * r) == RatFun(p, q));
    ++done;
  }
  // denominator normalization: positive leading coefficient, min exp 0
  RatFun x(LaurentPoly(1), -LaurentPoly::v(-3) + LaurentPoly::v(-1));
  CHECK(x.den().min_exp() == 0);
  CHECK(x.den().leading_coeff() > 0);
}

TEST_CASE("ratfun field ops") {
  std::mt19937 rng(23);
  for (int t = 0; t < 40; ++t) {
    LaurentPoly p = random_poly(rng), q = random_poly(rng);
    if (p.is_zero() || q.is_zero()) continue;
    RatFun a(p, q);
    CHECK(a / a == RatFun(1));
    CHECK(a - a == RatFun());
    CHECK(a * RatFun(1) == a);
  }
}

TEST_CASE("series expansion at v = infinity") {
  // 1/(1-v^-2) = 1 + v^-2 + v^-4 + ...
  RatFun f(LaurentPoly(1), LaurentPoly(1) - LaurentPoly::v(-2));
  auto s = f.series_at_infinity(5);
  CHECK(s.lowest_u_exp == 0);
  CHECK(s.coeffs[0] == 1);
  CHECK(s.coeffs[1] == 0);
  CHECK(s.coeffs[2] == 1);
  CHECK(s.coeffs[4] == 1);
  // v has a pole at infinity
  auto t = RatFun(LaurentPoly::v(1)).series_at_infinity(2);
  CHECK(t.lowest_u_exp == -1);
}

TEST_CASE("text rendering round trip") {
  LaurentPoly p = LaurentPoly::v(-1) + LaurentPoly(2) + LaurentPoly::v(3);
  CHECK(p.str() == "v^-1 + 2 + v^3");
  std::mt19937 rng(31);
  for (int t = 0; t < 60; ++t) {
    LaurentPoly a = random_poly(rng);
    CHECK(LaurentPoly::parse(a.str()) == a);
  }
}
