// The bar-type involution on the tensor of a Verma (or simple) module with
// a simple module, the product bilinear form, the canonical-basis solver,
// and the signed-basis certificate.
#pragma once

#include <memory>

#include "qforge/modules.hpp"

namespace qforge {

// Product of [r]! over the maximal constant runs of a word: the
// denominator clearing a word into the divided-power lattice.
inline LaurentPoly run_factorials(const Word& w) {
  LaurentPoly out(1);
  std::size_t k = 0;
  while (k < w.size()) {
    std::size_t run = 1;
    while (k + run < w.size() && w[k + run] == w[k]) ++run;
    out = out * qfact(static_cast<std::int64_t>(run));
    k += run;
  }
  return out;
}

// Membership of a rational function in c + v^{-1} Z[[v^{-1}]], decided by
// exact series expansion at v = infinity: no positive powers of v, the
// prescribed constant term, integer coefficients to the cutoff order.
inline bool in_constant_plus_lower(const RatFun& x, std::int64_t constant,
                                   std::size_t order = 24) {
  auto s = x.series_at_infinity(order);
  if (x.is_zero()) return constant == 0;
  if (s.lowest_u_exp < 0) return false;
  const mpq_class c0 = s.lowest_u_exp == 0 ? s.coeffs[0] : mpq_class(0);
  if (c0 != constant) return false;
  for (auto& c : s.coeffs)
    if (c.get_den() != 1) return false;
  return true;
}

struct SignedChecks {
  bool integral = false;
  bool invariant = false;
  bool norm = false;
  bool all() const { return integral && invariant && norm; }
};

struct CanonicalElement {
  WeightVector nu;       // total N[I]-depth below the highest weight
  std::size_t leading;   // index of the leading vector in the ordered basis
  RatVector coords;      // over the ordered basis of the weight space
};

// A two-factor tensor module with its semilinear involution Psi, built by
// the generation recursion: Psi fixes the vectors x xi ox xi and commutes
// with every lowering operator, and the weight spaces are spanned by such
// vectors together with lowered ones (checked at runtime).
class BasedTensor {
public:
  // first factor: the Verma module of weight lambda2 when first_verma,
  // otherwise its simple quotient; second factor: the simple module of
  // weight lambda1.
  BasedTensor(UqMinus& u, bool first_verma, WeightVector lambda2, WeightVector lambda1)
      : u_(u), first_verma_(first_verma), l2_(std::move(lambda2)), l1_(std::move(lambda1)),
        second_(u, l1_), cf1_(u, l1_) {
    if (first_verma_) {
      first_ = std::make_unique<VermaFactor>(u_, l2_);
    } else {
      first_ = std::make_unique<SimpleFactor>(u_, l2_);
      cf2_ = std::make_unique<ContravariantForm>(u_, l2_);
    }
    tm_ = std::make_unique<TensorModule>(std::vector<FactorModule*>{first_.get(), &second_});
  }

  UqMinus& algebra() { return u_; }
  TensorModule& module() { return *tm_; }
  const WeightVector& first_weight() const { return l2_; }
  const WeightVector& second_weight() const { return l1_; }
  bool first_verma() const { return first_verma_; }

  struct Space {
    std::vector<TensorKey> keys;  // ordered: second-factor depth, then key order
    RatMatrix psi;                // Psi(z_k) = sum_j psi[j][k] z_j, semilinear
  };

  // Basis order: increasing depth of the second (simple) factor, ties by
  // the natural key order.  The solver requires Psi unitriangular in this
  // order and reports violations instead of reordering.
  static bool key_before(const TensorKey& a, const TensorKey& b) {
    const auto ha = a.nus[1].height(), hb = b.nus[1].height();
    if (ha != hb) return ha < hb;
    return a < b;
  }

  const Space& space(const WeightVector& nu) {
    auto it = spaces_.find(nu);
    if (it != spaces_.end()) return it->second;
    Space sp;
    sp.keys = tm_->basis_at(nu);
    std::sort(sp.keys.begin(), sp.keys.end(), key_before);
    const std::size_t d = sp.keys.size();
    sp.psi.assign(d, RatVector(d));
    if (nu.is_zero()) {
      for (std::size_t k = 0; k < d; ++k) sp.psi[k][k] = RatFun(1);
      return spaces_.emplace(nu, std::move(sp)).first->second;
    }
    const CartanDatum& datum = u_.datum();
    RatMatrix rows;
    for (int i = 0; i < datum.size(); ++i) {
      const WeightVector prev_nu = nu - WeightVector::alpha(datum.size(), i);
      if (!prev_nu.nonnegative()) continue;
      const Space& prev = space(prev_nu);
      for (std::size_t j = 0; j < prev.keys.size(); ++j) {
        RatVector ej(prev.keys.size());
        ej[j] = RatFun(1);
        RatVector s = act_coords(Gen::F, i, prev, ej, sp.keys);
        RatVector t = act_coords(Gen::F, i, prev, column(prev.psi, j), sp.keys);
        rows.push_back(glue(bar(s), t));
      }
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (!sp.keys[k].nus[1].is_zero()) continue;
      RatVector ek(d);
      ek[k] = RatFun(1);
      rows.push_back(glue(ek, ek));
    }
    Echelon e = echelon(std::move(rows));
    for (int p : e.pivots)
      if (p >= static_cast<int>(d))
        throw std::runtime_error("BasedTensor: inconsistent involution at depth " + nu.str());
    if (e.rank() != static_cast<int>(d))
      throw std::runtime_error("BasedTensor: spanning vectors deficient at depth " + nu.str());
    for (std::size_t k = 0; k < d; ++k) {
      if (e.pivots[k] != static_cast<int>(k))
        throw std::runtime_error("BasedTensor: inconsistent involution at depth " + nu.str());
      for (std::size_t j = 0; j < d; ++j) sp.psi[j][k] = e.rows[k][d + j];
    }
    return spaces_.emplace(nu, std::move(sp)).first->second;
  }

  // Psi on coordinates: semilinear, so the coefficients are barred first.
  RatVector psi_apply(const WeightVector& nu, const RatVector& c) {
    return mat_apply(space(nu).psi, bar(c));
  }

  // Coordinates of a generator action applied to a coordinate vector of the
  // `from` space, expressed in the target key list.
  RatVector act_coords(Gen g, int i, const Space& from, const RatVector& c,
                       const std::vector<TensorKey>& target_keys) {
    TensorVector x = tm_->from_coords(c, from.keys);
    return tm_->coords(tm_->act(u_.datum(), g, i, x), target_keys);
  }

  // The product bilinear form on a weight space, as a Gram matrix over the
  // ordered basis.
  const RatMatrix& gram(const WeightVector& nu) {
    auto it = grams_.find(nu);
    if (it != grams_.end()) return it->second;
    const Space& sp = space(nu);
    const std::size_t d = sp.keys.size();
    RatMatrix g(d, RatVector(d));
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) {
        if (sp.keys[a].nus != sp.keys[b].nus) continue;
        RatFun val = first_form(sp.keys[a].nus[0], sp.keys[a].idx[0], sp.keys[b].idx[0]) *
                     second_form(sp.keys[a].nus[1], sp.keys[a].idx[1], sp.keys[b].idx[1]);
        g[a][b] = val;
        g[b][a] = std::move(val);
      }
    return grams_.emplace(nu, std::move(g)).first->second;
  }

  RatFun form(const WeightVector& nu, const RatVector& x, const RatVector& y) {
    const RatMatrix& g = gram(nu);
    RatFun out;
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (x[a].is_zero()) continue;
      for (std::size_t b = 0; b < y.size(); ++b)
        if (!g[a][b].is_zero() && !y[b].is_zero()) out += x[a] * g[a][b] * y[b];
    }
    return out;
  }

  // phi_i(x1 ox x2) = F_i x1 ox K_i^{-1} x2 + x1 ox F_i x2: the lowering
  // side of the form adjunction.  Defined on coordinate vectors; result in
  // the space at nu + alpha_i.
  RatVector phi_map(int i, const WeightVector& nu, const RatVector& c) {
    const CartanDatum& datum = u_.datum();
    const Space& from = space(nu);
    const WeightVector target = nu + WeightVector::alpha(datum.size(), i);
    const Space& to = space(target);
    TensorVector out;
    TensorVector x = tm_->from_coords(c, from.keys);
    for (auto& [key, coef] : x) {
      const std::int64_t kinv = -(l1_[i] - pairing_with_grading(datum, i, key.nus[1]));
      RatMatrix f0 = first_->f_matrix(i, key.nus[0]);
      for (std::size_t r = 0; r < f0.size(); ++r) {
        if (f0[r][key.idx[0]].is_zero()) continue;
        TensorKey tk = key;
        tk.nus[0] = key.nus[0] + WeightVector::alpha(datum.size(), i);
        tk.idx[0] = static_cast<int>(r);
        tensor_add(out, std::move(tk), coef * f0[r][key.idx[0]] * v_pow(kinv));
      }
      RatMatrix f1 = second_.f_matrix(i, key.nus[1]);
      for (std::size_t r = 0; r < f1.size(); ++r) {
        if (f1[r][key.idx[1]].is_zero()) continue;
        TensorKey tk = key;
        tk.nus[1] = key.nus[1] + WeightVector::alpha(datum.size(), i);
        tk.idx[1] = static_cast<int>(r);
        tensor_add(out, std::move(tk), coef * f1[r][key.idx[1]]);
      }
    }
    return tm_->coords(out, to.keys);
  }

  // eps_i(x1 ox x2) = _i r(x1) ox K_i^{-1} x2 + (v - v^{-1}) x1 ox
  // K_i^{-1} E_i x2: the raising side of the adjunction.  First factor must
  // be the Verma module.
  RatVector eps_map(int i, const WeightVector& nu, const RatVector& c) {
    if (!first_verma_) throw std::logic_error("eps_map: needs a Verma first factor");
    const CartanDatum& datum = u_.datum();
    const Space& from = space(nu);
    const WeightVector alpha = WeightVector::alpha(datum.size(), i);
    const Space& to = space(nu - alpha);
    TensorVector out;
    TensorVector x = tm_->from_coords(c, from.keys);
    const RatFun vmv(v_minus_vinv());
    for (auto& [key, coef] : x) {
      if (key.nus[0][i] > 0) {
        const WeightBasis& wb = u_.weight_basis(key.nus[0]);
        NormalElement rx = u_.normal_form(
            r_map(datum, RMapVariant::i_r, i,
                  u_.to_free(NormalElement{key.nus[0], unit(wb.words.size(), key.idx[0])})));
        const std::int64_t kinv = -(l1_[i] - pairing_with_grading(datum, i, key.nus[1]));
        for (std::size_t r = 0; r < rx.coords.size(); ++r) {
          if (rx.coords[r].is_zero()) continue;
          TensorKey tk = key;
          tk.nus[0] = key.nus[0] - alpha;
          tk.idx[0] = static_cast<int>(r);
          tensor_add(out, std::move(tk), coef * rx.coords[r] * v_pow(kinv));
        }
      }
      if (key.nus[1][i] > 0) {
        const WeightVector t1 = key.nus[1] - alpha;
        const std::int64_t kinv = -(l1_[i] - pairing_with_grading(datum, i, t1));
        RatMatrix e1 = second_.e_matrix(i, key.nus[1]);
        for (std::size_t r = 0; r < e1.size(); ++r) {
          if (e1[r][key.idx[1]].is_zero()) continue;
          TensorKey tk = key;
          tk.nus[1] = t1;
          tk.idx[1] = static_cast<int>(r);
          tensor_add(out, std::move(tk), coef * vmv * e1[r][key.idx[1]] * v_pow(kinv));
        }
      }
    }
    return tm_->coords(out, to.keys);
  }

  // The divided-power normalizer of one basis vector: the product of the
  // run factorials of both factor words.
  RatFun divided_scale(const TensorKey& key) {
    return RatFun(run_factorials(first_word(key)) * run_factorials(second_word(key)));
  }

  // The unique Psi-invariant elements that are unitriangular over the
  // divided-power rescaling of the basis, with off-leading divided-power
  // coordinates in v^{-1} Z[v^{-1}].  Returned coordinates are over the
  // plain word-tensor basis (leading coordinate 1 / normalizer).
  std::vector<CanonicalElement> canonical_basis(const WeightVector& nu) {
    const Space& sp = space(nu);
    const std::size_t d = sp.keys.size();
    RatVector fac(d);
    for (std::size_t k = 0; k < d; ++k) fac[k] = divided_scale(sp.keys[k]);
    auto ptilde = [&](std::size_t j, std::size_t k) {
      return sp.psi[j][k] * fac[j] / fac[k];
    };
    for (std::size_t k = 0; k < d; ++k) {
      if (!sp.psi[k][k].is_one())
        throw std::runtime_error("canonical_basis: non-unit diagonal at depth " + nu.str());
      for (std::size_t j = k + 1; j < d; ++j)
        if (!sp.psi[j][k].is_zero())
          throw std::runtime_error("canonical_basis: involution not triangular at depth " +
                                   nu.str());
    }
    std::vector<CanonicalElement> out;
    for (std::size_t k = 0; k < d; ++k) {
      RatVector a(d);  // divided-power coordinates
      a[k] = RatFun(1);
      for (std::size_t j = k; j-- > 0;) {
        RatFun gamma;
        for (std::size_t l = j + 1; l <= k; ++l)
          if (!a[l].is_zero() && !sp.psi[j][l].is_zero()) gamma += a[l].bar() * ptilde(j, l);
        if (gamma.is_zero()) continue;
        if (!gamma.is_laurent())
          throw std::runtime_error("canonical_basis: non-polynomial correction at depth " +
                                   nu.str());
        LaurentPoly g = gamma.as_laurent();
        if (g.bar() != -g || g.coeff(0) != 0)
          throw std::runtime_error("canonical_basis: correction not antisymmetric at depth " +
                                   nu.str());
        LaurentPoly low;
        for (auto& [e, cf] : g.terms())
          if (e < 0) low.set_term(e, cf);
        a[j] = RatFun(std::move(low));
      }
      for (std::size_t j = 0; j <= k; ++j)
        if (!a[j].is_zero()) a[j] = a[j] / fac[j];
      out.push_back({nu, k, std::move(a)});
    }
    return out;
  }

  // The three certificate conditions: divided-power integrality,
  // Psi-invariance, and self-pairing in 1 + v^{-1} Z[[v^{-1}]].
  SignedChecks verify_signed(const WeightVector& nu, const RatVector& c) {
    const Space& sp = space(nu);
    SignedChecks out;
    out.integral = true;
    for (std::size_t k = 0; k < sp.keys.size() && out.integral; ++k) {
      if (c[k].is_zero()) continue;
      RatFun scaled = c[k] * RatFun(run_factorials(first_word(sp.keys[k])) *
                                    run_factorials(second_word(sp.keys[k])));
      out.integral = scaled.is_laurent();
    }
    out.invariant = psi_apply(nu, c) == c;
    out.norm = in_constant_plus_lower(form(nu, c, c), 1);
    return out;
  }

  // The word underlying a first-factor basis index (for the divided-power
  // lattice normalization).
  const Word& first_word(const TensorKey& key) {
    if (first_verma_) return u_.weight_basis(key.nus[0]).words[key.idx[0]];
    auto& sq = static_cast<SimpleFactor&>(*first_).quotient();
    return u_.weight_basis(key.nus[0])
        .words[sq.space(key.nus[0]).free_cols[static_cast<std::size_t>(key.idx[0])]];
  }
  const Word& second_word(const TensorKey& key) {
    auto& sq = second_.quotient();
    return u_.weight_basis(key.nus[1])
        .words[sq.space(key.nus[1]).free_cols[static_cast<std::size_t>(key.idx[1])]];
  }

private:
  UqMinus& u_;
  bool first_verma_;
  WeightVector l2_, l1_;
  std::unique_ptr<FactorModule> first_;
  SimpleFactor second_;
  ContravariantForm cf1_;
  std::unique_ptr<ContravariantForm> cf2_;
  std::unique_ptr<TensorModule> tm_;
  std::map<WeightVector, Space> spaces_;
  std::map<WeightVector, RatMatrix> grams_;
  std::map<WeightVector, RatMatrix> gram1_, gram2_;

  static RatVector unit(std::size_t d, int k) {
    RatVector e(d);
    e[static_cast<std::size_t>(k)] = RatFun(1);
    return e;
  }
  static RatVector column(const RatMatrix& m, std::size_t j) {
    RatVector c(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) c[i] = m[i][j];
    return c;
  }
  static RatVector glue(RatVector a, const RatVector& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  // Form between two first-factor basis vectors at the same depth: the
  // U^- form for the Verma factor, the contravariant form on lifts for the
  // simple factor.
  RatFun first_form(const WeightVector& nu, int a, int b) {
    RatMatrix& g = factor_gram(gram1_, nu, true);
    return g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  RatFun second_form(const WeightVector& nu, int a, int b) {
    RatMatrix& g = factor_gram(gram2_, nu, false);
    return g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }

  RatMatrix& factor_gram(std::map<WeightVector, RatMatrix>& store, const WeightVector& nu,
                         bool is_first) {
    auto it = store.find(nu);
    if (it != store.end()) return it->second;
    RatMatrix g;
    if (is_first && first_verma_) {
      const WeightBasis& wb = u_.weight_basis(nu);
      const std::size_t d = wb.words.size();
      g.assign(d, RatVector(d));
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
          NormalElement ea{nu, unit(d, static_cast<int>(a))};
          NormalElement eb{nu, unit(d, static_cast<int>(b))};
          g[a][b] = u_.pairing(ea, eb);
          g[b][a] = g[a][b];
        }
    } else {
      SimpleQuotient& sq = is_first ? static_cast<SimpleFactor&>(*first_).quotient()
                                    : second_.quotient();
      ContravariantForm& cf = is_first ? *cf2_ : cf1_;
      const int d = sq.dim(nu);
      g.assign(static_cast<std::size_t>(d), RatVector(static_cast<std::size_t>(d)));
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
          g[a][b] = cf.value(sq.lift(nu, a), sq.lift(nu, b));
          g[b][a] = g[a][b];
        }
    }
    return store.emplace(nu, std::move(g)).first->second;
  }
};

// The quotient on the first factor: the image of a vector of
// M_{lambda2} ox V_{lambda1} in V_{lambda2} ox V_{lambda1}.  `target` must
// be the simple-first tensor over the same algebra and weights.
inline RatVector project_first(BasedTensor& source, BasedTensor& target,
                               const WeightVector& nu, const RatVector& c) {
  if (!source.first_verma() || target.first_verma())
    throw std::invalid_argument("project_first: wrong factor kinds");
  auto& sq = static_cast<SimpleFactor&>(target.module().factor(0)).quotient();
  const auto& skeys = source.space(nu).keys;
  TensorVector out;
  for (std::size_t k = 0; k < skeys.size(); ++k) {
    if (c[k].is_zero()) continue;
    const TensorKey& key = skeys[k];
    const std::size_t d0 = source.algebra().weight_basis(key.nus[0]).words.size();
    RatVector e0(d0);
    e0[static_cast<std::size_t>(key.idx[0])] = RatFun(1);
    RatVector q = sq.project(NormalElement{key.nus[0], std::move(e0)});
    for (std::size_t r = 0; r < q.size(); ++r) {
      if (q[r].is_zero()) continue;
      TensorKey tk = key;
      tk.idx[0] = static_cast<int>(r);
      tensor_add(out, std::move(tk), c[k] * q[r]);
    }
  }
  return target.module().coords(out, target.space(nu).keys);
}

} // namespace qforge
