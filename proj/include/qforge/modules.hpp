// Verma modules M_lambda with explicit E/F/K actions, the maximal
// submodule T_lambda and simple quotient V_lambda (two independent
// constructions), the contravariant form, tensor modules of N factors via
// the comultiplication, and the Frobenius-recursion construction of module
// homomorphisms.
#pragma once

#include "qforge/uqminus.hpp"

namespace qforge {

// v - v^-1, the denominator of the E-action formula.
inline LaurentPoly v_minus_vinv() {
  LaurentPoly p = LaurentPoly::v(1);
  p.add_term(-1, -1);
  return p;
}

// E_i on x xi_lambda at the free-algebra level:
//   E_i(x) = (v^{(i,lambda)} rbar_i(x) - v^{-(i,lambda-|x|+alpha_i)} i_rbar(x)) / (v - v^-1).
// lambda is a value vector ((i,lambda))_i.
inline FreeElement verma_e_free(const CartanDatum& datum, const WeightVector& lambda, int i,
                                const FreeElement& x) {
  if (x.is_zero()) return FreeElement(datum.size());
  const WeightVector nu = x.degree();
  const std::int64_t a = lambda[i];
  const std::int64_t b = -(a - pairing_with_grading(datum, i, nu) + 2);
  FreeElement num(datum.size());
  num.add_scaled(r_map(datum, RMapVariant::rbar_i, i, x), v_pow(a));
  num.add_scaled(r_map(datum, RMapVariant::i_rbar, i, x), -v_pow(b));
  FreeElement out(datum.size());
  const RatFun inv(LaurentPoly(1), v_minus_vinv());
  for (auto& [w, c] : num.combo()) out.add(w, c * inv);
  return out;
}

// Letter-removal form of the same action (independent oracle):
//   E_i(theta_{i_1}..theta_{i_m} xi) =
//     sum_k delta_{i,i_k} [(i, lambda - sum_{n>k} alpha_{i_n})] (word minus letter k).
inline FreeElement verma_e_letterwise(const CartanDatum& datum, const WeightVector& lambda,
                                      int i, const Word& w) {
  FreeElement out(datum.size());
  WeightVector tail = WeightVector::zero(datum.size());
  for (std::size_t k = w.size(); k-- > 0;) {
    if (w[k] == i) {
      Word rest;
      rest.reserve(w.size() - 1);
      rest.insert(rest.end(), w.begin(), w.begin() + k);
      rest.insert(rest.end(), w.begin() + k + 1, w.end());
      out.add(std::move(rest), qint_r(lambda[i] - pairing_with_grading(datum, i, tail)));
    }
    tail[w[k]] += 1;
  }
  return out;
}

enum class Gen { E, F, K, Kinv };

// The Verma module M_lambda realized on the weight spaces of U^-.
class VermaModule {
public:
  VermaModule(UqMinus& u, WeightVector lambda) : u_(u), lambda_(std::move(lambda)) {
    if (lambda_.size() != u_.vertex_count())
      throw std::invalid_argument("VermaModule: weight size mismatch");
  }

  UqMinus& algebra() { return u_; }
  const WeightVector& highest_weight() const { return lambda_; }
  NormalElement highest_vector() { return u_.one(); }

  // v^{sign * (i, lambda - nu)}
  RatFun k_scalar(int i, int sign, const WeightVector& nu) const {
    return v_pow(sign * (lambda_[i] - pairing_with_grading(u_.datum(), i, nu)));
  }

  NormalElement act_F(int i, const NormalElement& x) {
    const WeightVector target = x.degree + WeightVector::alpha(x.degree.size(), i);
    if (x.is_zero()) return u_.zero(target);
    FreeElement prod = FreeElement::from_word(u_.vertex_count(), {i}) * u_.to_free(x);
    return u_.normal_form(prod);
  }

  NormalElement act_E(int i, const NormalElement& x) {
    const WeightVector target = x.degree - WeightVector::alpha(x.degree.size(), i);
    if (x.is_zero() || !target.nonnegative()) return u_.zero(target);
    FreeElement e = verma_e_free(u_.datum(), lambda_, i, u_.to_free(x));
    if (e.is_zero()) return u_.zero(target);
    return u_.normal_form(e);
  }

  NormalElement act(Gen g, int i, const NormalElement& x) {
    switch (g) {
      case Gen::E: return act_E(i, x);
      case Gen::F: return act_F(i, x);
      case Gen::K: return scale(x, k_scalar(i, +1, x.degree));
      case Gen::Kinv: return scale(x, k_scalar(i, -1, x.degree));
    }
    throw std::logic_error("VermaModule::act");
  }

  static NormalElement scale(NormalElement x, const RatFun& c) {
    for (auto& e : x.coords) e *= c;
    return x;
  }

private:
  UqMinus& u_;
  WeightVector lambda_;
};

// One weight space of the quotient V_lambda = M_lambda / T_lambda:
// the echelonized T-span in weight-basis coordinates and the complementary
// (non-pivot) basis columns.
struct QuotientSpace {
  WeightVector degree;
  Echelon t_rows;
  std::vector<int> free_cols;

  int t_dim() const { return t_rows.rank(); }
  int dim() const { return static_cast<int>(free_cols.size()); }
};

// V_lambda via the left ideal T_lambda generated by theta_i^{(i,lambda)+1},
// cross-checked against the radical of the contravariant form.
class SimpleQuotient {
public:
  SimpleQuotient(UqMinus& u, WeightVector lambda) : u_(u), lambda_(std::move(lambda)) {
    if (!lambda_.nonnegative())
      throw std::invalid_argument("SimpleQuotient: weight must be dominant");
  }

  UqMinus& algebra() { return u_; }
  const WeightVector& highest_weight() const { return lambda_; }

  const QuotientSpace& space(const WeightVector& nu) {
    auto it = spaces_.find(nu);
    if (it != spaces_.end()) return it->second;
    const WeightBasis& wb = u_.weight_basis(nu);
    RatMatrix rows;
    for (int i = 0; i < u_.vertex_count(); ++i) {
      const std::int64_t p = lambda_[i] + 1;
      WeightVector rest = nu;
      rest[i] -= p;
      if (!rest.nonnegative()) continue;
      for (auto& w : words_of_degree(rest)) {
        Word full = w;
        full.insert(full.end(), p, i);
        rows.push_back(u_.normal_form_word(full).coords);
      }
    }
    QuotientSpace q;
    q.degree = nu;
    q.t_rows = echelon(std::move(rows));
    for (int col = 0; col < static_cast<int>(wb.words.size()); ++col)
      if (!q.t_rows.is_pivot(col)) q.free_cols.push_back(col);
    return spaces_.emplace(nu, std::move(q)).first->second;
  }

  int t_dim(const WeightVector& nu) { return space(nu).t_dim(); }
  int dim(const WeightVector& nu) { return space(nu).dim(); }

  // Quotient coordinates of an element of M_lambda, over the free columns.
  RatVector project(const NormalElement& x) {
    const QuotientSpace& q = space(x.degree);
    if (x.is_zero()) return RatVector(q.free_cols.size());
    RatVector red = reduce_mod(q.t_rows, x.coords);
    RatVector out(q.free_cols.size());
    for (std::size_t k = 0; k < q.free_cols.size(); ++k) out[k] = red[q.free_cols[k]];
    return out;
  }

  // The k-th quotient basis vector, represented by a weight-basis word.
  NormalElement lift(const WeightVector& nu, int k) {
    const QuotientSpace& q = space(nu);
    NormalElement e = u_.zero(nu);
    e.coords[q.free_cols.at(k)] = RatFun(1);
    return e;
  }

private:
  UqMinus& u_;
  WeightVector lambda_;
  std::map<WeightVector, QuotientSpace> spaces_;
};

// The contravariant form on M_lambda: (xi, xi) = 1 and
// (F_i x, y) = (x, v K_i^{-1} E_i y); symmetric, and its radical at each
// weight is T_lambda.
class ContravariantForm {
public:
  ContravariantForm(UqMinus& u, WeightVector lambda) : u_(u), lambda_(std::move(lambda)) {}

  RatFun on_words(const Word& x, const Word& y) {
    if (x.empty()) return y.empty() ? RatFun(1) : RatFun();
    if (y.empty()) return RatFun();
    auto key = std::make_pair(x, y);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    // (F_j x', y) = (x', v K_j^{-1} E_j y)
    const int j = x.front();
    const Word xrest(x.begin() + 1, x.end());
    const CartanDatum& d = u_.datum();
    const WeightVector nu = word_degree(y, d.size());
    FreeElement ey = verma_e_free(d, lambda_, j,
                                  FreeElement::from_word(d.size(), y));
    RatFun val;
    const RatFun twist =
        v_pow(1 - (lambda_[j] - pairing_with_grading(d, j, nu) + 2));
    for (auto& [w, c] : ey.combo()) val += c * on_words(xrest, w);
    val *= twist;
    return memo_.emplace(std::move(key), std::move(val)).first->second;
  }

  RatFun value(const NormalElement& x, const NormalElement& y) {
    if (x.is_zero() || y.is_zero()) return RatFun();
    const std::vector<Word>& wx = u_.weight_basis(x.degree).words;
    const std::vector<Word>& wy = u_.weight_basis(y.degree).words;
    RatFun s;
    for (std::size_t a = 0; a < wx.size(); ++a) {
      if (x.coords[a].is_zero()) continue;
      for (std::size_t b = 0; b < wy.size(); ++b) {
        if (y.coords[b].is_zero()) continue;
        s += x.coords[a] * y.coords[b] * on_words(wx[a], wy[b]);
      }
    }
    return s;
  }

  // Gram matrix on the weight-basis words of M_lambda at nu.
  RatMatrix gram(const WeightVector& nu) {
    const std::vector<Word>& ws = u_.weight_basis(nu).words;
    RatMatrix m(ws.size(), RatVector(ws.size()));
    for (std::size_t a = 0; a < ws.size(); ++a)
      for (std::size_t b = a; b < ws.size(); ++b) {
        m[a][b] = on_words(ws[a], ws[b]);
        if (b != a) m[b][a] = m[a][b];
      }
    return m;
  }

private:
  UqMinus& u_;
  WeightVector lambda_;
  std::map<std::pair<Word, Word>, RatFun> memo_;
};

// dim V_{lambda,nu} from the rank of the contravariant Gram matrix,
// cross-checked against the left-ideal construction.  A mismatch means one
// of the two T_lambda constructions is wrong and is a hard error.
inline int v_lambda_dims_via_form(UqMinus& u, const WeightVector& lambda,
                                  const WeightVector& nu) {
  ContravariantForm cf(u, lambda);
  const int via_form = rank(cf.gram(nu));
  SimpleQuotient sq(u, lambda);
  const int via_ideal = sq.dim(nu);
  if (via_form != via_ideal)
    throw std::runtime_error("v_lambda_dims_via_form: construction mismatch at nu=" +
                             nu.str() + ": form rank " + std::to_string(via_form) +
                             " vs ideal quotient " + std::to_string(via_ideal));
  return via_form;
}

// A graded factor of a tensor module: either a Verma module or a simple
// quotient, presented through per-weight bases and generator matrices.
// Matrices are column-per-source-basis-vector, row-per-target.
class FactorModule {
public:
  virtual ~FactorModule() = default;
  virtual const WeightVector& highest_weight() const = 0;
  virtual int dim(const WeightVector& nu) = 0;
  virtual RatMatrix f_matrix(int i, const WeightVector& nu) = 0;  // nu -> nu + alpha_i
  virtual RatMatrix e_matrix(int i, const WeightVector& nu) = 0;  // nu -> nu - alpha_i
};

class VermaFactor : public FactorModule {
public:
  VermaFactor(UqMinus& u, WeightVector lambda) : m_(u, std::move(lambda)) {}

  const WeightVector& highest_weight() const override { return m_.highest_weight(); }
  int dim(const WeightVector& nu) override { return m_.algebra().dim(nu); }

  RatMatrix f_matrix(int i, const WeightVector& nu) override {
    return matrix(Gen::F, i, nu, nu + alpha(i));
  }
  RatMatrix e_matrix(int i, const WeightVector& nu) override {
    return matrix(Gen::E, i, nu, nu - alpha(i));
  }

  VermaModule& verma() { return m_; }

private:
  VermaModule m_;
  std::map<std::tuple<int, int, WeightVector>, RatMatrix> memo_;

  WeightVector alpha(int i) const {
    return WeightVector::alpha(m_.highest_weight().size(), i);
  }
  RatMatrix matrix(Gen g, int i, const WeightVector& nu, const WeightVector& target) {
    auto key = std::make_tuple(static_cast<int>(g), i, nu);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const int rows = target.nonnegative() ? dim(target) : 0;
    const int cols = dim(nu);
    RatMatrix m(rows, RatVector(cols));
    for (int c = 0; c < cols; ++c) {
      NormalElement src = m_.algebra().zero(nu);
      src.coords[c] = RatFun(1);
      NormalElement dst = m_.act(g, i, src);
      for (int r = 0; r < rows; ++r) m[r][c] = dst.coords[r];
    }
    return memo_.emplace(std::move(key), std::move(m)).first->second;
  }
};

class SimpleFactor : public FactorModule {
public:
  SimpleFactor(UqMinus& u, WeightVector lambda)
      : m_(u, lambda), q_(u, std::move(lambda)) {}

  const WeightVector& highest_weight() const override { return m_.highest_weight(); }
  int dim(const WeightVector& nu) override {
    return nu.nonnegative() ? q_.dim(nu) : 0;
  }

  RatMatrix f_matrix(int i, const WeightVector& nu) override {
    return matrix(Gen::F, i, nu, nu + alpha(i));
  }
  RatMatrix e_matrix(int i, const WeightVector& nu) override {
    return matrix(Gen::E, i, nu, nu - alpha(i));
  }

  SimpleQuotient& quotient() { return q_; }

private:
  VermaModule m_;
  SimpleQuotient q_;
  std::map<std::tuple<int, int, WeightVector>, RatMatrix> memo_;

  WeightVector alpha(int i) const {
    return WeightVector::alpha(m_.highest_weight().size(), i);
  }
  RatMatrix matrix(Gen g, int i, const WeightVector& nu, const WeightVector& target) {
    auto key = std::make_tuple(static_cast<int>(g), i, nu);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const int rows = target.nonnegative() ? dim(target) : 0;
    const int cols = dim(nu);
    RatMatrix m(rows, RatVector(cols));
    for (int c = 0; c < cols; ++c) {
      NormalElement dst = m_.act(g, i, q_.lift(nu, c));
      RatVector proj = rows ? q_.project(dst) : RatVector();
      for (int r = 0; r < rows; ++r) m[r][c] = proj[r];
    }
    return memo_.emplace(std::move(key), std::move(m)).first->second;
  }
};

// Index of one tensor basis vector: the per-factor gradings and per-factor
// basis positions.
struct TensorKey {
  std::vector<WeightVector> nus;
  std::vector<int> idx;

  friend bool operator<(const TensorKey& a, const TensorKey& b) {
    if (a.nus != b.nus) return a.nus < b.nus;
    return a.idx < b.idx;
  }
  friend bool operator==(const TensorKey& a, const TensorKey& b) {
    return a.nus == b.nus && a.idx == b.idx;
  }
};

using TensorVector = std::map<TensorKey, RatFun>;

inline void tensor_add(TensorVector& v, TensorKey k, RatFun c) {
  if (c.is_zero()) return;
  auto it = v.find(k);
  if (it == v.end()) {
    v.emplace(std::move(k), std::move(c));
  } else {
    it->second += c;
    if (it->second.is_zero()) v.erase(it);
  }
}

inline bool tensor_equal(const TensorVector& a, const TensorVector& b) { return a == b; }

// Tensor product of factor modules with the comultiplication
//   Delta(E_i) = E_i ox 1 + K_i ox E_i,
//   Delta(F_i) = F_i ox K_{-i} + 1 ox F_i,
//   Delta(K_i) = K_i ox K_i,
// iterated left-nested over the ordered factor list.
class TensorModule {
public:
  explicit TensorModule(std::vector<FactorModule*> factors)
      : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("TensorModule: no factors");
  }

  int factor_count() const { return static_cast<int>(factors_.size()); }
  FactorModule& factor(int k) { return *factors_[k]; }

  // (i, lambda^k - nu^k) for factor k of a key.
  std::int64_t k_exp(const CartanDatum& d, int i, const TensorKey& key, int k) const {
    return factors_[k]->highest_weight()[i] - pairing_with_grading(d, i, key.nus[k]);
  }

  TensorVector act(const CartanDatum& d, Gen g, int i, const TensorVector& x) {
    TensorVector out;
    const int n = factor_count();
    for (auto& [key, c] : x) {
      if (g == Gen::K || g == Gen::Kinv) {
        std::int64_t e = 0;
        for (int k = 0; k < n; ++k) e += k_exp(d, i, key, k);
        tensor_add(out, key, c * v_pow(g == Gen::K ? e : -e));
        continue;
      }
      for (int k = 0; k < n; ++k) {
        std::int64_t twist = 0;
        if (g == Gen::F) {
          for (int a = k + 1; a < n; ++a) twist -= k_exp(d, i, key, a);
        } else {
          for (int a = 0; a < k; ++a) twist += k_exp(d, i, key, a);
        }
        const WeightVector alpha = WeightVector::alpha(d.size(), i);
        const WeightVector target =
            g == Gen::F ? key.nus[k] + alpha : key.nus[k] - alpha;
        if (!target.nonnegative()) continue;
        RatMatrix m = g == Gen::F ? factors_[k]->f_matrix(i, key.nus[k])
                                  : factors_[k]->e_matrix(i, key.nus[k]);
        for (std::size_t r = 0; r < m.size(); ++r) {
          const RatFun& entry = m[r][key.idx[k]];
          if (entry.is_zero()) continue;
          TensorKey tk = key;
          tk.nus[k] = target;
          tk.idx[k] = static_cast<int>(r);
          tensor_add(out, std::move(tk), c * entry * v_pow(twist));
        }
      }
    }
    return out;
  }

  // All compositions nu^1 + ... + nu^N = nu with every factor piece
  // nonzero-dimensional, in lexicographic order; yields the deterministic
  // basis enumeration of the depth-nu graded piece.
  std::vector<TensorKey> basis_at(const WeightVector& nu) {
    std::vector<TensorKey> out;
    const int n = factor_count();
    std::vector<WeightVector> nus(n);
    std::function<void(int, WeightVector)> rec = [&](int k, WeightVector left) {
      if (k == n - 1) {
        if (!factors_[k]->dim(left)) return;
        nus[k] = left;
        emit(out, nus);
        return;
      }
      for (auto& part : split_below(left)) {
        if (!factors_[k]->dim(part)) continue;
        nus[k] = part;
        rec(k + 1, left - part);
      }
    };
    rec(0, nu);
    return out;
  }

  int dim_at(const WeightVector& nu) {
    int total = 0;
    std::vector<TensorKey> keys = basis_at(nu);
    // basis_at enumerates individual vectors already
    total = static_cast<int>(keys.size());
    return total;
  }

  RatVector coords(const TensorVector& x, const std::vector<TensorKey>& basis) const {
    RatVector out(basis.size());
    TensorVector rest = x;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      auto it = rest.find(basis[k]);
      if (it != rest.end()) {
        out[k] = it->second;
        rest.erase(it);
      }
    }
    if (!rest.empty())
      throw std::runtime_error("TensorModule::coords: vector outside the enumerated basis");
    return out;
  }

  TensorVector from_coords(const RatVector& c, const std::vector<TensorKey>& basis) const {
    TensorVector out;
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (!c[k].is_zero()) tensor_add(out, basis[k], c[k]);
    return out;
  }

  TensorVector highest() {
    TensorKey key;
    const int dim0 = 0;
    (void)dim0;
    for (int k = 0; k < factor_count(); ++k) {
      key.nus.push_back(WeightVector::zero(factors_[k]->highest_weight().size()));
      key.idx.push_back(0);
    }
    TensorVector v;
    tensor_add(v, std::move(key), RatFun(1));
    return v;
  }

private:
  std::vector<FactorModule*> factors_;

  void emit(std::vector<TensorKey>& out, const std::vector<WeightVector>& nus) {
    std::vector<int> idx(nus.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == nus.size()) {
        out.push_back({nus, idx});
        return;
      }
      const int d = factors_[k]->dim(nus[k]);
      for (int j = 0; j < d; ++j) {
        idx[k] = j;
        rec(k + 1);
      }
      idx[k] = 0;
    };
    rec(0);
  }

  // All nonnegative vectors <= left, in lexicographic order.
  static std::vector<WeightVector> split_below(const WeightVector& left) {
    std::vector<WeightVector> out;
    WeightVector cur = WeightVector::zero(left.size());
    std::function<void(int)> rec = [&](int i) {
      if (i == left.size()) {
        out.push_back(cur);
        return;
      }
      for (std::int64_t c = 0; c <= left[i]; ++c) {
        cur[i] = c;
        rec(i + 1);
      }
      cur[i] = 0;
    };
    rec(0);
    return out;
  }
};

// The unique U-module homomorphism M_base ox M_lambda -> target extending
// xi ox xi_lambda |-> block, built by the Frobenius recursion
//   phi(u ox F_j w) = F_j phi(u ox w) - v^{-(j, wt w)} phi(F_j u ox w).
// The base and target share the vertex indexing on the base graph (the
// target datum may have extra vertices, e.g. framing vertices).
class InducedHom {
public:
  InducedHom(UqMinus& base, WeightVector left_lambda, WeightVector base_lambda,
             UqMinus& target, WeightVector target_lambda, FreeElement block)
      : base_(base),
        left_lambda_(std::move(left_lambda)),
        base_lambda_(std::move(base_lambda)),
        target_(target),
        target_lambda_(std::move(target_lambda)),
        block_(std::move(block)) {}

  // phi(word_u xi ox word_w xi_lambda) as a target element.
  NormalElement eval(const Word& u, const Word& w) {
    auto key = std::make_pair(u, w);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    NormalElement val;
    if (w.empty()) {
      FreeElement e = block_ * FreeElement::from_word(target_.vertex_count(), u);
      val = target_.normal_form(e);
    } else {
      const int j = w.front();
      const Word wrest(w.begin() + 1, w.end());
      // wt(w' xi_lambda) at j
      const std::int64_t wtj =
          base_lambda_[j] -
          pairing_with_grading(base_.datum(), j,
                               word_degree(wrest, base_.vertex_count()));
      NormalElement a = eval(u, wrest);
      FreeElement fa = FreeElement::from_word(target_.vertex_count(), {j}) *
                       target_.to_free(a);
      val = fa.is_zero() ? target_.zero(a.degree + WeightVector::alpha(
                                                       target_.vertex_count(), j))
                         : target_.normal_form(fa);
      Word fu = u;
      fu.insert(fu.begin(), j);
      NormalElement b = eval(fu, wrest);
      for (std::size_t k = 0; k < b.coords.size(); ++k)
        val.coords[k] -= v_pow(-wtj) * b.coords[k];
    }
    return memo_.emplace(std::move(key), std::move(val)).first->second;
  }

  // Representative independence on the second factor: whenever words are
  // linearly dependent in M_lambda, their phi-values satisfy the same
  // relations, for every first-factor word up to the cutoff.
  bool well_defined(std::int64_t cutoff) {
    const int n = base_.vertex_count();
    for (auto& nu2 : gradings_up_to(n, cutoff)) {
      const std::vector<Word> words = words_of_degree(nu2);
      if (words.empty()) continue;
      // columns = words, rows = weight-basis coordinates
      const int dim = base_.dim(nu2);
      RatMatrix cols(dim, RatVector(words.size()));
      for (std::size_t w = 0; w < words.size(); ++w) {
        NormalElement nf = base_.normal_form_word(words[w]);
        for (int r = 0; r < dim; ++r) cols[r][w] = nf.coords[r];
      }
      Echelon e = echelon(std::move(cols));
      // kernel vector per non-pivot column
      for (std::size_t col = 0; col < words.size(); ++col) {
        if (e.is_pivot(static_cast<int>(col))) continue;
        RatVector ker(words.size());
        ker[col] = RatFun(1);
        for (std::size_t r = 0; r < e.rows.size(); ++r)
          ker[e.pivots[r]] = -e.rows[r][col];
        for (auto& nu1 : gradings_up_to(n, cutoff - nu2.height())) {
          for (auto& u : words_of_degree(nu1)) {
            NormalElement acc;
            bool first = true;
            for (std::size_t w = 0; w < words.size(); ++w) {
              if (ker[w].is_zero()) continue;
              NormalElement t = VermaModule::scale(eval(u, words[w]), ker[w]);
              if (first) {
                acc = std::move(t);
                first = false;
              } else {
                for (std::size_t k = 0; k < acc.coords.size(); ++k)
                  acc.coords[k] += t.coords[k];
              }
            }
            if (!first && !acc.is_zero()) return false;
          }
        }
      }
    }
    return true;
  }

  // phi(M_base ox T_lambda) = 0: every second-factor word ending in the
  // ideal generator theta_j^{(j,lambda)+1} maps to zero.
  bool kills_t(std::int64_t cutoff) {
    const int n = base_.vertex_count();
    for (int j = 0; j < n; ++j) {
      const std::int64_t p = base_lambda_[j] + 1;
      if (p > cutoff) continue;
      for (auto& nux : gradings_up_to(n, cutoff - p)) {
        for (auto& x : words_of_degree(nux)) {
          Word w = x;
          w.insert(w.end(), p, j);
          for (auto& nu1 : gradings_up_to(n, cutoff - nux.height() - p)) {
            for (auto& u : words_of_degree(nu1))
              if (!eval(u, w).is_zero()) return false;
          }
        }
      }
    }
    return true;
  }

  // Condition (M) for the base assignment: the target E-action commutes
  // with phi on xi ox -, i.e. E_i(block * x) = block * E_i^{base}(x).
  bool base_equivariant(std::int64_t cutoff) {
    const int n = base_.vertex_count();
    VermaModule target_m(target_, target_lambda_);
    for (auto& nu : gradings_up_to(n, cutoff)) {
      for (auto& x : words_of_degree(nu)) {
        for (int i = 0; i < n; ++i) {
          NormalElement lhs = target_m.act_E(i, eval(x, Word{}));
          FreeElement ex = verma_e_free(base_.datum(), left_lambda_, i,
                                        FreeElement::from_word(n, x));
          NormalElement rhs;
          if (ex.is_zero()) {
            rhs = target_.zero(lhs.degree);
          } else {
            FreeElement lifted(target_.vertex_count());
            for (auto& [w, c] : ex.combo()) lifted.add(w, c);
            FreeElement prod = block_ * lifted;
            rhs = prod.is_zero() ? target_.zero(lhs.degree) : target_.normal_form(prod);
          }
          if (!(lhs == rhs)) return false;
        }
      }
    }
    return true;
  }

  static std::vector<WeightVector> gradings_up_to(int n, std::int64_t h) {
    std::vector<WeightVector> out;
    if (h < 0) return out;
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

private:
  UqMinus& base_;
  WeightVector left_lambda_;
  WeightVector base_lambda_;
  UqMinus& target_;
  WeightVector target_lambda_;
  FreeElement block_;
  std::map<std::pair<Word, Word>, NormalElement> memo_;
};

} // namespace qforge
