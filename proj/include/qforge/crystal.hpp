// Combinatorial crystals: a sequence model of the big crystal built from
// elementary factors along a periodic vertex order, highest-weight tags for
// Verma crystals, normal-crystal extraction, tensor products by the
// two-factor rule, generation, component counts, and graph export.
#pragma once

#include <json.hpp>

#include <optional>
#include <set>

#include "qforge/framed.hpp"

namespace qforge {

// Sentinel for the "minus infinity" value of epsilon/phi.
inline constexpr std::int64_t kMinusInf = std::numeric_limits<std::int64_t>::min() / 4;

inline bool stat_ge(std::int64_t a, std::int64_t b) {
  return a != kMinusInf && (b == kMinusInf || a >= b);
}
inline bool stat_gt(std::int64_t a, std::int64_t b) {
  return a != kMinusInf && (b == kMinusInf || a > b);
}

// One factor of the sequence model: entries a_1, a_2, ... attached to the
// periodic vertex order iota_k = vertex((k-1) mod n), factor 1 rightmost in
// the tensor ordering, trailing zeros trimmed.
struct BaseNode {
  std::vector<std::int64_t> seq;

  void trim() {
    while (!seq.empty() && seq.back() == 0) seq.pop_back();
  }
  friend bool operator<(const BaseNode& a, const BaseNode& b) { return a.seq < b.seq; }
  friend bool operator==(const BaseNode& a, const BaseNode& b) { return a.seq == b.seq; }
};

// Verma: highest-weight crystal of the Verma module (lowering maps act
// freely).  Simple: the normal crystal of the simple quotient (lowering map
// for i vanishes once phi_i reaches zero).  The big crystal itself is the
// Verma kind with zero highest weight.
enum class FactorKind { Verma, Simple };

struct CrystalFactor {
  FactorKind kind;
  WeightVector lambda;  // values (i, lambda)
};

// A node of a tensor crystal: one BaseNode per descriptor factor, listed
// left to right.
struct CrystalNode {
  std::vector<BaseNode> parts;

  friend bool operator<(const CrystalNode& a, const CrystalNode& b) { return a.parts < b.parts; }
  friend bool operator==(const CrystalNode& a, const CrystalNode& b) { return a.parts == b.parts; }
};

class Crystal {
public:
  Crystal(CartanDatum datum, std::vector<CrystalFactor> factors)
      : datum_(std::move(datum)), factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("Crystal: no factors");
    for (auto& f : factors_) {
      if (f.lambda.size() != datum_.size())
        throw std::invalid_argument("Crystal: weight size mismatch");
      if (f.kind == FactorKind::Simple && !is_dominant(f.lambda))
        throw std::invalid_argument("Crystal: simple factor needs a dominant weight");
    }
  }

  const CartanDatum& datum() const { return datum_; }
  const std::vector<CrystalFactor>& factors() const { return factors_; }

  CrystalNode highest() const {
    CrystalNode b;
    b.parts.resize(factors_.size());
    return b;
  }

  // Total N[I]-degree sum_k a_k alpha_{iota_k} of one factor.
  WeightVector part_degree(const BaseNode& part) const {
    const int n = datum_.size();
    WeightVector nu = WeightVector::zero(n);
    for (std::size_t k = 0; k < part.seq.size(); ++k)
      nu[static_cast<int>(k) % n] += part.seq[k];
    return nu;
  }

  WeightVector degree(const CrystalNode& b) const {
    WeightVector nu = WeightVector::zero(datum_.size());
    for (auto& p : b.parts) nu += part_degree(p);
    return nu;
  }

  // The weight of the node as the value vector ((i, wt))_i.
  WeightVector weight(const CrystalNode& b) const {
    WeightVector lam = WeightVector::zero(datum_.size());
    for (auto& f : factors_) lam += f.lambda;
    return weight_of(datum_, lam, degree(b));
  }

  std::int64_t wt_i(const CrystalNode& b, int i) const { return weight(b)[i]; }

  // --- single-factor maps ---------------------------------------------

  std::int64_t part_eps(const BaseNode& part, int i, int extra_periods = 0) const {
    return suffix_eps(part, i, extra_periods)[0];
  }

  std::int64_t part_phi(const BaseNode& part, const CrystalFactor& f, int i,
                        int extra_periods = 0) const {
    const int n = datum_.size();
    const int m = window(part, extra_periods);
    std::int64_t phi = kMinusInf;
    for (int p = 1; p <= m; ++p) {
      const int k = m + 1 - p;
      const int c = (k - 1) % n;
      const std::int64_t a = entry(part, k);
      const std::int64_t w = -a * datum_.pairing(i, c);
      if (phi != kMinusInf) phi += w;
      if (c == i) phi = std::max(phi, -a);
    }
    return phi + f.lambda[i];
  }

  std::int64_t part_wt(const BaseNode& part, const CrystalFactor& f, int i) const {
    return f.lambda[i] - pairing_with_grading(datum_, i, part_degree(part));
  }

  std::optional<BaseNode> part_f(const BaseNode& part, const CrystalFactor& f, int i) const {
    if (f.kind == FactorKind::Simple && part_phi(part, f, i) <= 0) return std::nullopt;
    const int m = window(part, 0);
    const auto s = suffix_eps(part, i, 0);
    for (int p = 1; p <= m; ++p) {
      const int k = m + 1 - p;
      if ((k - 1) % datum_.size() != i) continue;
      if (!stat_gt(-entry(part, k), s[static_cast<std::size_t>(p)])) continue;
      BaseNode out = part;
      if (out.seq.size() < static_cast<std::size_t>(k)) out.seq.resize(k, 0);
      ++out.seq[k - 1];
      out.trim();
      return out;
    }
    return std::nullopt;
  }

  std::optional<BaseNode> part_e(const BaseNode& part, const CrystalFactor& f, int i) const {
    (void)f;
    const auto s = suffix_eps(part, i, 0);
    if (s[0] <= 0) return std::nullopt;
    const int m = window(part, 0);
    for (int p = 1; p <= m; ++p) {
      const int k = m + 1 - p;
      if ((k - 1) % datum_.size() != i) continue;
      if (!stat_ge(-entry(part, k), s[static_cast<std::size_t>(p)])) continue;
      if (entry(part, k) <= 0)
        throw std::logic_error("Crystal: raising map selected an empty factor");
      BaseNode out = part;
      --out.seq[k - 1];
      out.trim();
      return out;
    }
    return std::nullopt;
  }

  // --- tensor maps (two-factor rule folded over the factor list) -------

  std::int64_t eps(const CrystalNode& b, int i, int extra_periods = 0) const {
    const auto s = factor_suffix_eps(b, i, extra_periods);
    return s[0];
  }

  std::int64_t phi(const CrystalNode& b, int i, int extra_periods = 0) const {
    std::int64_t phi = kMinusInf;
    for (std::size_t a = 0; a < b.parts.size(); ++a) {
      if (phi != kMinusInf) phi += part_wt(b.parts[a], factors_[a], i);
      phi = std::max(phi, part_phi(b.parts[a], factors_[a], i, extra_periods));
    }
    return phi;
  }

  std::optional<CrystalNode> f(const CrystalNode& b, int i) const {
    const auto s = factor_suffix_eps(b, i, 0);
    for (std::size_t a = 0; a < b.parts.size(); ++a) {
      if (!stat_gt(part_phi(b.parts[a], factors_[a], i), s[a + 1])) continue;
      auto moved = part_f(b.parts[a], factors_[a], i);
      if (!moved) return std::nullopt;
      CrystalNode out = b;
      out.parts[a] = std::move(*moved);
      return out;
    }
    return std::nullopt;
  }

  std::optional<CrystalNode> e(const CrystalNode& b, int i) const {
    const auto s = factor_suffix_eps(b, i, 0);
    if (s[0] <= 0) return std::nullopt;
    for (std::size_t a = 0; a < b.parts.size(); ++a) {
      if (!stat_ge(part_phi(b.parts[a], factors_[a], i), s[a + 1])) continue;
      auto moved = part_e(b.parts[a], factors_[a], i);
      if (!moved) return std::nullopt;
      CrystalNode out = b;
      out.parts[a] = std::move(*moved);
      return out;
    }
    return std::nullopt;
  }

  // --- generation ------------------------------------------------------

  struct Edge {
    std::size_t from;
    int i;
    std::size_t to;
  };

  struct Generated {
    std::vector<CrystalNode> nodes;  // discovery order (breadth first, sorted frontiers)
    std::vector<Edge> edges;
    std::map<WeightVector, std::vector<std::size_t>> by_degree;
    std::int64_t depth = 0;

    int count_at(const WeightVector& nu) const {
      auto it = by_degree.find(nu);
      return it == by_degree.end() ? 0 : static_cast<int>(it->second.size());
    }
    bool contains(const CrystalNode& b) const {
      return std::find(nodes.begin(), nodes.end(), b) != nodes.end();
    }
  };

  // The node set to the given total height: the product of the per-factor
  // crystals, each the closure of its highest node under the lowering maps
  // (a Simple factor exhausts itself, a Verma factor is cut off at the
  // height).  Edges are the lowering maps between listed nodes.  Counts at
  // degrees of height <= depth are complete.
  Generated generate(std::int64_t depth) const {
    std::vector<std::vector<BaseNode>> parts;
    for (auto& fac : factors_) parts.push_back(factor_closure(fac, depth));

    Generated g;
    g.depth = depth;
    std::map<CrystalNode, std::size_t> index;
    CrystalNode cur;
    cur.parts.resize(factors_.size());
    std::function<void(std::size_t, std::int64_t)> emit = [&](std::size_t a,
                                                              std::int64_t height) {
      if (a == factors_.size()) {
        index[cur] = g.nodes.size();
        g.by_degree[degree(cur)].push_back(g.nodes.size());
        g.nodes.push_back(cur);
        return;
      }
      for (auto& p : parts[a]) {
        const std::int64_t h = part_degree(p).height();
        if (height + h > depth) continue;
        cur.parts[a] = p;
        emit(a + 1, height + h);
      }
    };
    emit(0, 0);

    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      for (int i = 0; i < datum_.size(); ++i) {
        auto fb = f(g.nodes[k], i);
        if (!fb) continue;
        auto it = index.find(*fb);
        if (it != index.end()) g.edges.push_back({k, i, it->second});
      }
    }
    return g;
  }

  // The descriptor with the last factor replaced by its normal crystal:
  // the target of the localization morphism.
  Crystal localized() const {
    auto fs = factors_;
    if (fs.back().kind != FactorKind::Verma)
      throw std::invalid_argument("localized: last factor is not a Verma crystal");
    fs.back().kind = FactorKind::Simple;
    return Crystal(datum_, std::move(fs));
  }

private:
  CartanDatum datum_;
  std::vector<CrystalFactor> factors_;

  // Breadth-first closure of one factor's highest node under its lowering
  // maps, frontiers sorted for a deterministic listing.
  std::vector<BaseNode> factor_closure(const CrystalFactor& fac, std::int64_t depth) const {
    std::vector<BaseNode> out{BaseNode{}};
    std::set<BaseNode> seen{BaseNode{}};
    std::vector<BaseNode> frontier = out;
    for (std::int64_t h = 0; h < depth && !frontier.empty(); ++h) {
      std::vector<BaseNode> next;
      for (auto& b : frontier)
        for (int i = 0; i < datum_.size(); ++i) {
          auto fb = part_f(b, fac, i);
          if (fb && seen.insert(*fb).second) next.push_back(*fb);
        }
      std::sort(next.begin(), next.end());
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    return out;
  }

  // Window length: the support rounded up to whole periods, plus one extra
  // period so a fresh highest elementary factor of every color sits to the
  // left of the support.
  int window(const BaseNode& part, int extra_periods) const {
    const int n = datum_.size();
    const int periods =
        (static_cast<int>(part.seq.size()) + n - 1) / n + 1 + extra_periods;
    return periods * n;
  }

  static std::int64_t entry(const BaseNode& part, int k) {
    return static_cast<std::size_t>(k) <= part.seq.size() ? part.seq[k - 1] : 0;
  }

  // s[p] = epsilon_i of the subword at positions p+1..m read left to right
  // for p in 0..m (position p corresponds to factor k = m+1-p); s[m] is the
  // empty tail.  Index shift: returned vector has s[p-1] = epsilon of
  // positions p..m, so s[0] is epsilon of the whole factor.
  std::vector<std::int64_t> suffix_eps(const BaseNode& part, int i, int extra_periods) const {
    const int n = datum_.size();
    const int m = window(part, extra_periods);
    std::vector<std::int64_t> s(static_cast<std::size_t>(m) + 1, kMinusInf);
    for (int p = m; p >= 1; --p) {
      const int k = m + 1 - p;
      const int c = (k - 1) % n;
      const std::int64_t a = entry(part, k);
      const std::int64_t w = -a * datum_.pairing(i, c);
      std::int64_t tail = s[static_cast<std::size_t>(p)];
      if (tail != kMinusInf) tail -= w;
      s[static_cast<std::size_t>(p) - 1] = (c == i) ? std::max(a, tail) : tail;
    }
    return s;
  }

  // Same suffix fold over the factor list: s[a] = epsilon_i of factors
  // a..N-1, s[N] empty.
  std::vector<std::int64_t> factor_suffix_eps(const CrystalNode& b, int i,
                                              int extra_periods) const {
    const std::size_t N = b.parts.size();
    std::vector<std::int64_t> s(N + 1, kMinusInf);
    for (std::size_t a = N; a-- > 0;) {
      const std::int64_t w = part_wt(b.parts[a], factors_[a], i);
      std::int64_t tail = s[a + 1];
      if (tail != kMinusInf) tail -= w;
      s[a] = std::max(part_eps(b.parts[a], i, extra_periods), tail);
    }
    return s;
  }
};

// The localization morphism on the last factor: a node of the crystal with
// last factor B(lambda, infinity) survives iff it also lies in the crystal
// with last factor B(lambda).  `image` must be generated at least as deep
// as the node's height.
inline std::optional<CrystalNode> localize(const CrystalNode& b,
                                           const Crystal::Generated& image) {
  if (image.contains(b)) return b;
  return std::nullopt;
}

// Component-count identity data for a framed descriptor d^1, ..., d^N over
// the base datum: the node count at degree nu in
// B(d^1) x ... x B(d^{N-1}) x B(d^N, infinity) against the closed formula
// sum over nu^1 + ... + nu^N = nu of
// prod_{a<N} dim V_{d^a, nu^a} * dim U^-_{nu^N}.
inline std::pair<std::int64_t, std::int64_t> component_count(
    UqMinus& base, const std::vector<WeightVector>& dseq, const WeightVector& nu) {
  const int N = static_cast<int>(dseq.size());
  if (N == 0) throw std::invalid_argument("component_count: empty descriptor");

  std::vector<CrystalFactor> factors;
  for (int a = 0; a < N - 1; ++a) factors.push_back({FactorKind::Simple, dseq[a]});
  factors.push_back({FactorKind::Verma, dseq[N - 1]});
  Crystal crystal(base.datum(), std::move(factors));
  const std::int64_t via_crystal = crystal.generate(nu.height()).count_at(nu);

  std::vector<std::unique_ptr<SimpleQuotient>> simples;
  for (int a = 0; a < N - 1; ++a)
    simples.push_back(std::make_unique<SimpleQuotient>(base, dseq[a]));
  std::int64_t via_formula = 0;
  std::vector<WeightVector> cur;
  detail::compositions(nu, N, cur, [&](const std::vector<WeightVector>& parts) {
    std::int64_t term = base.dim(parts[static_cast<std::size_t>(N) - 1]);
    for (int a = 0; a < N - 1 && term != 0; ++a)
      term *= simples[a]->dim(parts[a]);
    via_formula += term;
  });
  return {via_crystal, via_formula};
}

// --- deterministic exports ----------------------------------------------

inline std::string node_label(const Crystal& c, const CrystalNode& b) {
  std::string s = "wt=" + c.weight(b).str();
  for (auto& p : b.parts) {
    s += " [";
    for (std::size_t k = 0; k < p.seq.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(p.seq[k]);
    }
    s += "]";
  }
  return s;
}

inline std::string export_dot(const Crystal& c, const Crystal::Generated& g) {
  std::string out = "digraph crystal {\n";
  for (std::size_t k = 0; k < g.nodes.size(); ++k)
    out += "  n" + std::to_string(k) + " [label=\"" + node_label(c, g.nodes[k]) + "\"];\n";
  for (auto& e : g.edges)
    out += "  n" + std::to_string(e.from) + " -> n" + std::to_string(e.to) +
           " [label=\"" + c.datum().vertex_name(e.i) + "\"];\n";
  out += "}\n";
  return out;
}

inline nlohmann::ordered_json export_json(const Crystal& c, const Crystal::Generated& g) {
  nlohmann::ordered_json j;
  j["depth"] = g.depth;
  j["weights"] = nlohmann::ordered_json::array();
  for (auto& [nu, ids] : g.by_degree) {
    nlohmann::ordered_json w;
    w["degree"] = nu.coords();
    w["count"] = ids.size();
    w["nodes"] = nlohmann::ordered_json::array();
    for (auto id : ids) {
      nlohmann::ordered_json nd;
      nd["id"] = id;
      nd["weight"] = c.weight(g.nodes[id]).coords();
      auto parts = nlohmann::ordered_json::array();
      for (auto& p : g.nodes[id].parts) parts.push_back(p.seq);
      nd["parts"] = std::move(parts);
      w["nodes"].push_back(std::move(nd));
    }
    j["weights"].push_back(std::move(w));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (auto& e : g.edges) {
    nlohmann::ordered_json ed;
    ed["from"] = e.from;
    ed["vertex"] = c.datum().vertex_name(e.i);
    ed["to"] = e.to;
    j["edges"].push_back(std::move(ed));
  }
  return j;
}

} // namespace qforge
