// Modules over the framed-graph algebra: the spans K(d•), K′(d•), T(d•),
// T′(d•), divided-power framing blocks, E-stability, the higher-order
// Serre vanishing, and the graded-dimension comparisons against
// Verma-times-simples tensor products.
#pragma once

#include "qforge/modules.hpp"

#include <memory>
#include <set>

namespace qforge {

// Index of the framing vertex i+ in frame(datum): frame() appends the
// framing copies after the base vertices, in base order.
inline int framing_index(int base_count, int i) { return base_count + i; }

// The word of the divided-power block theta^d = prod_i theta_{i+}^{(d_i)},
// framing letters in base-vertex order.
inline Word theta_block_word(int base_count, const WeightVector& d) {
  Word w;
  for (int i = 0; i < d.size(); ++i)
    w.insert(w.end(), d[i], framing_index(base_count, i));
  return w;
}

// theta^d as a free element of the framed algebra (with the divided-power
// scalar), and its normal form.
inline FreeElement theta_block_free(const UqMinus& framed, int base_count,
                                    const WeightVector& d) {
  LaurentPoly fact(1);
  for (int i = 0; i < d.size(); ++i) fact = fact * qfact(d[i]);
  return FreeElement::from_word(framed.datum().size(), theta_block_word(base_count, d),
                                RatFun(LaurentPoly(1), fact));
}

inline NormalElement theta_block(UqMinus& framed, int base_count, const WeightVector& d) {
  return framed.normal_form(theta_block_free(framed, base_count, d));
}

enum class FramedVariant { K, Kprime, T, Tprime };

// One graded piece of a framed span: the interleaved spanning words and
// the exact dimension of their image in the framed quotient algebra.
struct FramedSpan {
  std::vector<WeightVector> dseq;
  WeightVector nu;            // base-graph degree
  WeightVector framed_degree; // full degree in the framed algebra
  std::vector<Word> words;    // deduplicated spanning words
  int dim = 0;
};

namespace detail {

// All ways to write nu as an ordered sum of `parts` nonnegative vectors.
inline void compositions(const WeightVector& nu, int parts,
                         std::vector<WeightVector>& cur,
                         const std::function<void(const std::vector<WeightVector>&)>& fn) {
  if (parts == 1) {
    cur.push_back(nu);
    fn(cur);
    cur.pop_back();
    return;
  }
  std::vector<WeightVector> splits;
  WeightVector w = WeightVector::zero(nu.size());
  std::function<void(int)> rec = [&](int i) {
    if (i == nu.size()) {
      splits.push_back(w);
      return;
    }
    for (std::int64_t c = 0; c <= nu[i]; ++c) {
      w[i] = c;
      rec(i + 1);
    }
    w[i] = 0;
  };
  rec(0);
  for (auto& part : splits) {
    cur.push_back(part);
    compositions(nu - part, parts - 1, cur, fn);
    cur.pop_back();
  }
}

} // namespace detail

// Spanning words of one graded piece of K/K'/T/T'(d•) inside the framed
// algebra, with the dimension computed as the rank of the pairing matrix
// against the weight-basis words of the ambient degree.
class FramedSpans {
public:
  FramedSpans(UqMinus& framed, int base_count, std::vector<WeightVector> dseq)
      : framed_(framed), n_(base_count), dseq_(std::move(dseq)) {
    for (auto& d : dseq_) {
      if (d.size() != n_) throw std::invalid_argument("FramedSpans: d size mismatch");
      if (!d.nonnegative()) throw std::invalid_argument("FramedSpans: d must be >= 0");
    }
  }

  UqMinus& algebra() { return framed_; }
  int base_count() const { return n_; }
  const std::vector<WeightVector>& dseq() const { return dseq_; }

  WeightVector d_total() const {
    WeightVector t = WeightVector::zero(n_);
    for (auto& d : dseq_) t += d;
    return t;
  }

  // Base degree nu embedded into the framed vertex set, plus the framing
  // block degree.
  WeightVector framed_degree(const WeightVector& nu) const {
    WeightVector full = WeightVector::zero(2 * n_);
    for (int i = 0; i < n_; ++i) full[i] = nu[i];
    WeightVector t = d_total();
    for (int i = 0; i < n_; ++i) full[framing_index(n_, i)] = t[i];
    return full;
  }

  FramedSpan span(const WeightVector& nu, FramedVariant variant) {
    auto key = std::make_pair(nu, static_cast<int>(variant));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    FramedSpan s;
    s.dseq = dseq_;
    s.nu = nu;
    s.framed_degree = framed_degree(nu);
    std::set<Word> words;
    const int N = static_cast<int>(dseq_.size());
    std::vector<Word> blocks;
    for (auto& d : dseq_) blocks.push_back(theta_block_word(n_, d));

    auto assemble = [&](const std::vector<WeightVector>& parts,
                        const Word* tail_run) {
      // one word per choice of x_a of each degree part
      std::vector<std::vector<Word>> choices;
      for (auto& p : parts) choices.push_back(words_of_degree(p));
      std::function<void(std::size_t, Word)> rec = [&](std::size_t k, Word acc) {
        if (k == choices.size()) {
          words.insert(std::move(acc));
          return;
        }
        for (auto& x : choices[k]) {
          Word w = acc;
          w.insert(w.end(), x.begin(), x.end());
          if (k < static_cast<std::size_t>(N)) {
            if (tail_run && k + 1 == static_cast<std::size_t>(N))
              w.insert(w.end(), tail_run->begin(), tail_run->end());
            w.insert(w.end(), blocks[k].begin(), blocks[k].end());
          }
          rec(k + 1, std::move(w));
        }
      };
      rec(0, Word{});
    };

    std::vector<WeightVector> cur;
    if (variant == FramedVariant::K) {
      detail::compositions(nu, N, cur,
                           [&](const std::vector<WeightVector>& parts) {
                             assemble(parts, nullptr);
                           });
    } else if (variant == FramedVariant::Kprime || variant == FramedVariant::Tprime) {
      detail::compositions(nu, N + 1, cur,
                           [&](const std::vector<WeightVector>& parts) {
                             if (variant == FramedVariant::Tprime &&
                                 parts.back().is_zero())
                               return;
                             assemble(parts, nullptr);
                           });
    } else {  // T: x_1 B_1 ... x_N theta_i^{d^N_i + 1} B_N
      for (int i = 0; i < n_; ++i) {
        const std::int64_t p = dseq_.back()[i] + 1;
        WeightVector rest = nu;
        rest[i] -= p;
        if (!rest.nonnegative()) continue;
        Word run(static_cast<std::size_t>(p), i);
        detail::compositions(rest, N, cur,
                             [&](const std::vector<WeightVector>& parts) {
                               assemble(parts, &run);
                             });
      }
    }

    s.words.assign(words.begin(), words.end());
    s.dim = span_rank(s.words, s.framed_degree);
    return memo_.emplace(std::move(key), std::move(s)).first->second;
  }

  // Rank of a word span inside the framed quotient: pairing matrix against
  // the weight-basis words of the ambient degree (the form is nondegenerate
  // on the quotient, so the rank equals the span's image dimension).
  int span_rank(const std::vector<Word>& span_words, const WeightVector& full_degree) {
    if (span_words.empty()) return 0;
    const std::vector<Word>& basis = framed_.weight_basis(full_degree).words;
    LaurentMatrix m(span_words.size(), std::vector<LaurentPoly>(basis.size()));
    FormContext& f = framed_.form();
    for (std::size_t r = 0; r < span_words.size(); ++r)
      for (std::size_t c = 0; c < basis.size(); ++c)
        m[r][c] = f.scaled_form(basis[c], span_words[r]);
    return bareiss_rank(std::move(m));
  }

  // Echelonized coordinates of the span, for membership tests.
  Echelon span_rows(const FramedSpan& s) {
    RatMatrix rows;
    for (auto& w : s.words) rows.push_back(framed_.normal_form_word(w).coords);
    return echelon(std::move(rows));
  }

  // True iff the M_0-Verma E_i action maps K(d•)_nu into K(d•)_{nu - alpha_i}.
  bool e_stability(const WeightVector& nu, int i) {
    FramedSpan src = span(nu, FramedVariant::K);
    WeightVector target_nu = nu - WeightVector::alpha(n_, i);
    const WeightVector zero_wt = WeightVector::zero(2 * n_);
    VermaModule m0(framed_, zero_wt);
    if (!target_nu.nonnegative()) {
      for (auto& w : src.words)
        if (!m0.act_E(i, framed_.normal_form_word(w)).is_zero()) return false;
      return true;
    }
    FramedSpan dst = span(target_nu, FramedVariant::K);
    Echelon rows = span_rows(dst);
    for (auto& w : src.words) {
      NormalElement e = m0.act_E(i, framed_.normal_form_word(w));
      if (e.is_zero()) continue;
      if (!is_zero(reduce_mod(rows, e.coords))) return false;
    }
    return true;
  }

private:
  UqMinus& framed_;
  int n_;
  std::vector<WeightVector> dseq_;
  std::map<std::pair<WeightVector, int>, FramedSpan> memo_;
};

// sum_{t=0}^{p} (-1)^t theta_i^{(p-t)} theta_{i+}^{(d_i)} theta_i^{(t)} = 0
// in the framed quotient, with p = d_i + 1.
inline bool higher_serre_vanishes(UqMinus& framed, int base_count, int i, std::int64_t d_i) {
  const std::int64_t p = d_i + 1;
  const int n2 = framed.datum().size();
  WeightVector d = WeightVector::zero(base_count);
  d[i] = d_i;
  FreeElement block = theta_block_free(framed, base_count, d);
  FreeElement total(n2);
  for (std::int64_t t = 0; t <= p; ++t) {
    FreeElement left = FreeElement::from_word(
        n2, Word(static_cast<std::size_t>(p - t), i),
        RatFun(LaurentPoly(1), qfact(p - t)));
    FreeElement right = FreeElement::from_word(
        n2, Word(static_cast<std::size_t>(t), i), RatFun(LaurentPoly(1), qfact(t)));
    FreeElement term = left * block * right;
    total.add_scaled(term, t % 2 ? RatFun(-1) : RatFun(1));
  }
  if (total.is_zero()) return true;
  return framed.normal_form(total).is_zero();
}

// One row of the graded-dimension report.
struct DimRow {
  std::string descriptor;
  WeightVector nu;
  int lhs = 0;
  int rhs = 0;
  std::string status;  // "eq" or "lt"
};

// Per-nu comparison of dim K(d•) against dim(M_{\lambda^N} ox V_{lambda^{N-1}}
// ox ... ox V_{lambda^1}) and of dim K'(d•) against dim(M_0 ox V_{lambda^N}
// ox ... ox V_{lambda^1}), where (i, lambda^a) = d^a_i.  The surjections
// force lhs <= rhs everywhere; for N <= 2 the K comparison must be equality.
class FramedComparison {
public:
  FramedComparison(UqMinus& base, UqMinus& framed, std::vector<WeightVector> dseq)
      : base_(base), spans_(framed, base.vertex_count(), std::move(dseq)) {}

  FramedSpans& spans() { return spans_; }

  // dim of (M_mu ox V_{lambda^{m-1}} ox ... ox V_{lambda^0})_nu where the
  // simple factors run over `simples` and the Verma factor is unrestricted.
  int tensor_dim(const std::vector<WeightVector>& simples, const WeightVector& nu) {
    int total = 0;
    std::vector<WeightVector> cur;
    std::function<void(const std::vector<WeightVector>&)> fn =
        [&](const std::vector<WeightVector>& parts) {
          int prod = base_.dim(parts.back());
          for (std::size_t a = 0; a < simples.size() && prod; ++a)
            prod *= simple_dim(simples[a], parts[a]);
          total += prod;
        };
    detail::compositions(nu, static_cast<int>(simples.size()) + 1, cur, fn);
    return total;
  }

  std::vector<DimRow> compare(std::int64_t cutoff) {
    std::vector<DimRow> rows;
    const auto& dseq = spans_.dseq();
    const int N = static_cast<int>(dseq.size());
    std::vector<WeightVector> k_simples(dseq.begin(), dseq.end() - 1);
    std::vector<WeightVector> kp_simples(dseq.begin(), dseq.end());
    for (auto& nu : InducedHom::gradings_up_to(base_.vertex_count(), cutoff)) {
      {
        DimRow r;
        r.descriptor = "K" + dseq_str();
        r.nu = nu;
        r.lhs = spans_.span(nu, FramedVariant::K).dim;
        r.rhs = tensor_dim(k_simples, nu);
        r.status = r.lhs == r.rhs ? "eq" : "lt";
        if (r.lhs > r.rhs)
          throw std::runtime_error("FramedComparison: span exceeds tensor dimension at " +
                                   nu.str());
        if (N <= 2 && r.lhs != r.rhs)
          throw std::runtime_error("FramedComparison: equality violated for N<=2 at " +
                                   nu.str() + ": " + std::to_string(r.lhs) + " vs " +
                                   std::to_string(r.rhs));
        rows.push_back(std::move(r));
      }
      {
        DimRow r;
        r.descriptor = "K'" + dseq_str();
        r.nu = nu;
        r.lhs = spans_.span(nu, FramedVariant::Kprime).dim;
        r.rhs = tensor_dim(kp_simples, nu);
        r.status = r.lhs == r.rhs ? "eq" : "lt";
        if (r.lhs > r.rhs)
          throw std::runtime_error("FramedComparison: span exceeds tensor dimension at " +
                                   nu.str());
        rows.push_back(std::move(r));
      }
    }
    return rows;
  }

  int simple_dim(const WeightVector& lambda, const WeightVector& nu) {
    if (!nu.nonnegative()) return 0;
    auto it = simples_.find(lambda);
    if (it == simples_.end())
      it = simples_.emplace(lambda, std::make_unique<SimpleQuotient>(base_, lambda)).first;
    return it->second->dim(nu);
  }

  std::string dseq_str() const {
    std::string s = "(";
    for (std::size_t a = 0; a < spans_.dseq().size(); ++a) {
      if (a) s += ",";
      s += spans_.dseq()[a].str();
    }
    return s + ")";
  }

private:
  UqMinus& base_;
  FramedSpans spans_;
  std::map<WeightVector, std::unique_ptr<SimpleQuotient>> simples_;
};

// The Frobenius-induced map M_0 ox M_lambda -> K'(d) with
// xi ox xi_lambda |-> theta^d, where (i, lambda) = d_i.
inline InducedHom framed_induced_hom(UqMinus& base, UqMinus& framed, const WeightVector& d) {
  const int n = base.vertex_count();
  return InducedHom(base, WeightVector::zero(n), d, framed,
                    WeightVector::zero(2 * n), theta_block_free(framed, n, d));
}

} // namespace qforge
