// Weight spaces of U^- realized as the free algebra modulo the radical of
// Lusztig's form: normal forms, multiplication, divided powers, and the
// quantum Serre checks certifying the quotient model.
#pragma once

#include "qforge/freealg.hpp"

namespace qforge {

// Deterministic basis of one weight space: the first words in lexicographic
// order whose Gram submatrix reaches full rank, with the inverse of that
// submatrix for coordinate solves.
struct WeightBasis {
  WeightVector degree;
  std::vector<Word> words;     // basis words, lex order
  LaurentMatrix gram_scaled;   // scaled Gram on the basis words
  RatMatrix gram_inverse;      // inverse of gram_scaled over Q(v)
};

// Coordinates of an element of U^-_nu over the weight basis.
struct NormalElement {
  WeightVector degree;
  RatVector coords;  // aligned with WeightBasis::words

  bool is_zero() const { return qforge::is_zero(coords); }
  friend bool operator==(const NormalElement& a, const NormalElement& b) {
    return a.degree == b.degree && a.coords == b.coords;
  }
};

class UqMinus {
public:
  explicit UqMinus(const CartanDatum& datum, KVStore* cache = nullptr)
      : form_(datum, cache) {}

  const CartanDatum& datum() const { return form_.datum(); }
  FormContext& form() { return form_; }
  int vertex_count() const { return datum().size(); }

  int dim(const WeightVector& nu) { return form_.gram(nu).rank; }

  const WeightBasis& weight_basis(const WeightVector& nu) {
    auto it = bases_.find(nu);
    if (it != bases_.end()) return it->second;
    const GramData& g = form_.gram(nu);
    WeightBasis wb;
    wb.degree = nu;
    std::vector<std::size_t> selected;
    int cur_rank = 0;
    for (std::size_t w = 0; w < g.words.size() && cur_rank < g.rank; ++w) {
      auto trial = selected;
      trial.push_back(w);
      LaurentMatrix sub(trial.size(), std::vector<LaurentPoly>(trial.size()));
      for (std::size_t a = 0; a < trial.size(); ++a)
        for (std::size_t b = 0; b < trial.size(); ++b)
          sub[a][b] = g.scaled[trial[a]][trial[b]];
      if (bareiss_rank(sub) > cur_rank) {
        selected = std::move(trial);
        ++cur_rank;
      }
    }
    const std::size_t r = selected.size();
    wb.words.reserve(r);
    for (auto w : selected) wb.words.push_back(g.words[w]);
    wb.gram_scaled.assign(r, std::vector<LaurentPoly>(r));
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        wb.gram_scaled[a][b] = g.scaled[selected[a]][selected[b]];
    wb.gram_inverse = invert(wb.gram_scaled);
    return bases_.emplace(nu, std::move(wb)).first->second;
  }

  NormalElement zero(const WeightVector& nu) {
    // Degrees outside N[I] index genuinely zero spaces (e.g. E_i at the
    // highest weight); represent them with no coordinates.
    if (!nu.nonnegative()) return {nu, {}};
    return {nu, RatVector(weight_basis(nu).words.size())};
  }
  NormalElement one() {
    WeightVector nu = WeightVector::zero(vertex_count());
    NormalElement e = zero(nu);
    e.coords[0] = RatFun(1);
    return e;
  }

  // Orthogonal projection: the unique coordinates c with
  // (b', x) = sum_b c_b (b', b) for every basis word b'.
  NormalElement normal_form(const FreeElement& x) {
    if (x.is_zero())
      throw std::invalid_argument("normal_form: zero element needs an explicit degree");
    const WeightVector nu = x.degree();
    const WeightBasis& wb = weight_basis(nu);
    RatVector rhs(wb.words.size());
    for (std::size_t b = 0; b < wb.words.size(); ++b)
      rhs[b] = form_.scaled_pairing(wb.words[b], x);
    return {nu, mat_apply(wb.gram_inverse, rhs)};
  }

  NormalElement normal_form_word(const Word& w) {
    return normal_form(FreeElement::from_word(vertex_count(), w));
  }

  FreeElement to_free(const NormalElement& x) {
    const WeightBasis& wb = weight_basis(x.degree);
    FreeElement e(vertex_count());
    for (std::size_t b = 0; b < wb.words.size(); ++b)
      if (!x.coords[b].is_zero()) e.add(wb.words[b], x.coords[b]);
    return e;
  }

  NormalElement multiply(const NormalElement& a, const NormalElement& b) {
    FreeElement prod = to_free(a) * to_free(b);
    if (prod.is_zero()) return zero(a.degree + b.degree);
    return normal_form(prod);
  }

  // theta_i^(n) = theta_i^n / [n]!
  NormalElement divided_power(int i, std::int64_t n) {
    Word w(static_cast<std::size_t>(n), i);
    FreeElement e = FreeElement::from_word(vertex_count(), std::move(w),
                                           RatFun(LaurentPoly(1), qfact(n)));
    return normal_form(e);
  }

  // The quantum Serre element sum_p (-1)^p [1-a_ij choose p]
  // theta_i^p theta_j theta_i^{1-a_ij-p}.
  FreeElement serre_element(int i, int j) {
    if (i == j) throw std::invalid_argument("serre_element: needs i != j");
    const std::int64_t a = datum().pairing(i, j);
    const std::int64_t top = 1 - a;
    FreeElement e(vertex_count());
    for (std::int64_t p = 0; p <= top; ++p) {
      Word w;
      w.insert(w.end(), p, i);
      w.push_back(j);
      w.insert(w.end(), top - p, i);
      RatFun c(qbinom(top, p));
      if (p % 2) c = -c;
      e.add(std::move(w), c);
    }
    return e;
  }

  // True iff the Serre element pairs to zero with every word of its degree.
  bool serre_in_radical(int i, int j) {
    FreeElement e = serre_element(i, j);
    for (auto& w : words_of_degree(e.degree()))
      if (!form_.scaled_pairing(w, e).is_zero()) return false;
    return true;
  }

  RatFun pairing(const NormalElement& a, const NormalElement& b) {
    if (a.is_zero() || b.is_zero()) return RatFun();
    return form_.form(to_free(a), to_free(b));
  }

private:
  FormContext form_;
  std::map<WeightVector, WeightBasis> bases_;

  static RatMatrix invert(const LaurentMatrix& m) {
    const std::size_t n = m.size();
    RatMatrix aug(n, RatVector(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) aug[i][j] = RatFun(m[i][j]);
      aug[i][n + i] = RatFun(1);
    }
    Echelon e = echelon(std::move(aug));
    if (e.rank() != static_cast<int>(n))
      throw std::runtime_error("WeightBasis: singular Gram submatrix");
    RatMatrix inv(n, RatVector(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
    return inv;
  }
};

} // namespace qforge
