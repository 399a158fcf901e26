#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qforge/uqminus.hpp>

#include <random>

using namespace qforge;

namespace {

CartanDatum a1() { return CartanDatum({"1"}, {}); }
CartanDatum a2() { return CartanDatum({"1", "2"}, {{"1", "2"}}); }
CartanDatum a3() { return CartanDatum({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}}); }

// Independent oracle for path graphs A_n: the positive roots are the
// interval sums alpha_i + ... + alpha_j; counts partitions of nu into them
// by direct enumeration.
std::int64_t kostant_partitions_path(int n, const WeightVector& nu) {
  std::vector<WeightVector> roots;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      WeightVector r = WeightVector::zero(n);
      for (int k = i; k <= j; ++k) r[k] = 1;
      roots.push_back(r);
    }
  std::function<std::int64_t(std::size_t, WeightVector)> count =
      [&](std::size_t idx, WeightVector left) -> std::int64_t {
    if (left.is_zero()) return 1;
    if (idx == roots.size()) return 0;
    std::int64_t total = count(idx + 1, left);
    WeightVector cur = left;
    while (true) {
      cur -= roots[idx];
      if (!cur.nonnegative()) break;
      total += count(idx + 1, cur);
      if (cur.is_zero()) break;
    }
    return total;
  };
  return count(0, nu);
}

std::vector<WeightVector> gradings_up_to_height(int n, std::int64_t h) {
  std::vector<WeightVector> out;
  WeightVector cur = WeightVector::zero(n);
  std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t left) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (std::int64_t c = 0; c <= left; ++c) {
      cur[i] = c;
      rec(i + 1, left - c);
    }
    cur[i] = 0;
  };
  rec(0, h);
  return out;
}

} // namespace

TEST_CASE("weight basis selection") {
  UqMinus u1(a1());
  auto& b1 = u1.weight_basis(WeightVector({3}));
  CHECK(b1.words == std::vector<Word>{{0, 0, 0}});

  UqMinus u2(a2());
  auto& b2 = u2.weight_basis(WeightVector({1, 1}));
  CHECK(b2.words == std::vector<Word>{{0, 1}, {1, 0}});
  auto& b3 = u2.weight_basis(WeightVector({2, 1}));
  // rank 2 of three words; greedy picks the first two in lex order
  CHECK(b3.words == std::vector<Word>{{0, 0, 1}, {0, 1, 0}});
}

TEST_CASE("normal form") {
  UqMinus u(a2());
  // basis words map to unit vectors
  auto nf = u.normal_form_word({0, 1});
  CHECK(nf.coords[0] == RatFun(1));
  CHECK(nf.coords[1] == RatFun());
  // the Serre element has zero normal form
  FreeElement serre = u.serre_element(0, 1);
  CHECK(u.normal_form(serre).is_zero());
  // theta2 theta1 theta1 is a combination of the two basis words
  auto x = u.normal_form_word({1, 0, 0});
  CHECK(!x.is_zero());
  // consistency: pairing with every degree word matches the free pairing
  FreeElement xf = u.to_free(x);
  FormContext& f = u.form();
  for (auto& w : words_of_degree(WeightVector({2, 1})))
    CHECK(f.scaled_pairing(w, xf) ==
          f.scaled_pairing(w, FreeElement::from_word(2, {1, 0, 0})));
}

TEST_CASE("multiplication") {
  UqMinus u(a2());
  NormalElement one = u.one();
  NormalElement t1 = u.normal_form_word({0});
  CHECK(u.multiply(one, t1) == t1);

  UqMinus u1(a1());
  auto sq = u1.multiply(u1.normal_form_word({0}), u1.normal_form_word({0}));
  CHECK(sq.coords.size() == 1);
  CHECK(sq.coords[0] == RatFun(1));

  // multiply(theta1, theta1 theta2) = normal_form(theta1 theta1 theta2)
  auto p = u.multiply(u.normal_form_word({0}), u.normal_form_word({0, 1}));
  CHECK(p == u.normal_form_word({0, 0, 1}));
}

TEST_CASE("associativity on random triples") {
  UqMinus u(a2());
  std::mt19937 rng(19);
  std::uniform_int_distribution<int> len(0, 2), letter(0, 1);
  for (int t = 0; t < 25; ++t) {
    auto rand_el = [&] {
      Word w(len(rng));
      for (auto& c : w) c = letter(rng);
      return u.normal_form_word(w);
    };
    NormalElement a = rand_el(), b = rand_el(), c = rand_el();
    CHECK(u.multiply(u.multiply(a, b), c) == u.multiply(a, u.multiply(b, c)));
  }
}

TEST_CASE("divided powers") {
  UqMinus u(a1());
  CHECK(u.divided_power(0, 0) == u.one());
  CHECK(u.divided_power(0, 1) == u.normal_form_word({0}));
  auto dp2 = u.divided_power(0, 2);
  CHECK(dp2.coords[0] == RatFun(LaurentPoly(1), qfact(2)));
}

TEST_CASE("serre elements lie in the radical") {
  UqMinus u2(a2());
  CHECK(u2.serre_in_radical(0, 1));
  CHECK(u2.serre_in_radical(1, 0));

  CartanDatum f1 = frame(a1());
  UqMinus uf(f1);
  CHECK(uf.serre_in_radical(0, 1));

  // disconnected pair: theta_i theta_j - theta_j theta_i
  CartanDatum f2 = frame(a2());
  UqMinus uff(f2);
  CHECK(uff.serre_in_radical(f2.vertex_index("1+"), f2.vertex_index("2+")));
}

TEST_CASE("dimensions match Kostant partition counts") {
  struct Row {
    CartanDatum datum;
    int n;
  };
  std::vector<Row> data = {{a1(), 1}, {a2(), 2}, {a3(), 3}};
  for (auto& row : data) {
    UqMinus u(row.datum);
    for (auto& nu : gradings_up_to_height(row.n, 6))
      CHECK(u.dim(nu) == kostant_partitions_path(row.n, nu));
  }
}
