// The free associative algebra on generators theta_i graded by N[I]:
// words, the four twisted derivations, Lusztig's bilinear form, and
// per-weight Gram matrices with exact ranks.
#pragma once

#include "qforge/cartan.hpp"
#include "qforge/linalg.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace qforge {

// A monomial theta_{i1} ... theta_{im}, stored as vertex indices.
using Word = std::vector<int>;

inline WeightVector word_degree(const Word& w, int n) {
  WeightVector d = WeightVector::zero(n);
  for (int i : w) d[i] += 1;
  return d;
}

inline std::string word_str(const CartanDatum& datum, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int i : w) {
    if (!s.empty()) s += ".";
    s += datum.vertex_name(i);
  }
  return s;
}

// All words of degree nu, in lexicographic order under the vertex order.
inline std::vector<Word> words_of_degree(const WeightVector& nu) {
  std::vector<Word> out;
  Word cur;
  WeightVector left = nu;
  const std::int64_t total = nu.height();
  std::function<void()> rec = [&] {
    if (static_cast<std::int64_t>(cur.size()) == total) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < left.size(); ++i) {
      if (left[i] == 0) continue;
      left[i] -= 1;
      cur.push_back(i);
      rec();
      cur.pop_back();
      left[i] += 1;
    }
  };
  rec();
  return out;
}

// A homogeneous element of the free algebra: a Q(v)-combination of words
// of one common degree.
class FreeElement {
public:
  FreeElement() = default;
  explicit FreeElement(int n) : n_(n) {}
  static FreeElement from_word(int n, Word w, RatFun c = RatFun(1)) {
    FreeElement e(n);
    e.add(std::move(w), std::move(c));
    return e;
  }
  static FreeElement unit(int n) { return from_word(n, {}); }

  int vertex_count() const { return n_; }
  const std::map<Word, RatFun>& combo() const { return combo_; }
  bool is_zero() const { return combo_.empty(); }

  WeightVector degree() const {
    if (combo_.empty()) throw std::runtime_error("FreeElement: zero element has no degree");
    return word_degree(combo_.begin()->first, n_);
  }

  void add(Word w, RatFun c) {
    if (c.is_zero()) return;
    if (!combo_.empty() &&
        word_degree(w, n_) != word_degree(combo_.begin()->first, n_))
      throw std::invalid_argument("FreeElement: mixed degrees");
    auto it = combo_.find(w);
    if (it == combo_.end()) {
      combo_.emplace(std::move(w), std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) combo_.erase(it);
    }
  }
  void add_scaled(const FreeElement& o, const RatFun& c) {
    for (auto& [w, x] : o.combo_) add(w, x * c);
  }

  FreeElement& operator+=(const FreeElement& o) {
    add_scaled(o, RatFun(1));
    return *this;
  }
  friend FreeElement operator*(const RatFun& c, FreeElement e) {
    FreeElement r(e.n_);
    for (auto& [w, x] : e.combo_) r.add(w, x * c);
    return r;
  }
  // Concatenation product.
  friend FreeElement operator*(const FreeElement& a, const FreeElement& b) {
    int n = a.n_ ? a.n_ : b.n_;
    FreeElement r(n);
    for (auto& [wa, ca] : a.combo_)
      for (auto& [wb, cb] : b.combo_) {
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        r.add(std::move(w), ca * cb);
      }
    return r;
  }

  friend bool operator==(const FreeElement& a, const FreeElement& b) { return a.combo_ == b.combo_; }

private:
  int n_ = 0;
  std::map<Word, RatFun> combo_;
};

// The four twisted derivations of the free algebra.
enum class RMapVariant { i_r, r_i, i_rbar, rbar_i };

// Removal of one letter i at position k carries a v-twist depending on the
// variant: prefix pairing for the left maps, suffix pairing for the right.
inline FreeElement r_map(const CartanDatum& datum, RMapVariant variant, int i, const Word& w) {
  const int n = datum.size();
  FreeElement out(n);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != i) continue;
    std::int64_t t = 0;
    switch (variant) {
      case RMapVariant::i_r:
        for (std::size_t p = 0; p < k; ++p) t += datum.pairing(i, w[p]);
        break;
      case RMapVariant::i_rbar:
        for (std::size_t p = 0; p < k; ++p) t -= datum.pairing(i, w[p]);
        break;
      case RMapVariant::r_i:
        for (std::size_t p = k + 1; p < w.size(); ++p) t += datum.pairing(i, w[p]);
        break;
      case RMapVariant::rbar_i:
        for (std::size_t p = k + 1; p < w.size(); ++p) t -= datum.pairing(i, w[p]);
        break;
    }
    Word rest;
    rest.reserve(w.size() - 1);
    rest.insert(rest.end(), w.begin(), w.begin() + k);
    rest.insert(rest.end(), w.begin() + k + 1, w.end());
    out.add(std::move(rest), v_pow(t));
  }
  return out;
}

inline FreeElement r_map(const CartanDatum& datum, RMapVariant variant, int i, const FreeElement& x) {
  FreeElement out(datum.size());
  for (auto& [w, c] : x.combo()) out.add_scaled(r_map(datum, variant, i, w), c);
  return out;
}

// 1 - v^-2, the denominator unit of Lusztig's form.
inline LaurentPoly one_minus_v_m2() {
  LaurentPoly p(1);
  p.add_term(-2, -1);
  return p;
}

// Minimal string key/value store interface; the disk cache implements it.
struct KVStore {
  virtual ~KVStore() = default;
  virtual std::optional<std::string> get(const std::string& key) = 0;
  virtual void put(const std::string& key, const std::string& value) = 0;
};

// Gram data of one weight space of the free algebra: the degree, the
// lexicographic word list, the scaled matrix (1-v^-2)^{|nu|} [(w, w')]
// with integer Laurent entries, and its exact rank.
struct GramData {
  WeightVector degree;
  std::vector<Word> words;
  LaurentMatrix scaled;
  int rank = 0;
};

// Evaluation context for Lusztig's form on the free algebra of one datum.
// Values are memoized; gram(nu) results are additionally cached in an
// optional KVStore under hash(datum)/gram/nu.
class FormContext {
public:
  explicit FormContext(CartanDatum datum, KVStore* cache = nullptr)
      : datum_(std::move(datum)), hash_(datum_hash(datum_)), cache_(cache) {}

  const CartanDatum& datum() const { return datum_; }

  // (1-v^-2)^m (x, y) for words of common length m; an integer Laurent
  // polynomial by the form's scaling law.
  const LaurentPoly& scaled_form(const Word& x, const Word& y) {
    auto key = std::make_pair(x, y);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    LaurentPoly val;
    if (x.empty() && y.empty()) {
      val = LaurentPoly(1);
    } else if (!x.empty() && x.size() == y.size()) {
      const int i = x.front();
      Word xrest(x.begin() + 1, x.end());
      std::int64_t prefix = 0;
      for (std::size_t k = 0; k < y.size(); ++k) {
        if (y[k] == i) {
          Word yrest;
          yrest.reserve(y.size() - 1);
          yrest.insert(yrest.end(), y.begin(), y.begin() + k);
          yrest.insert(yrest.end(), y.begin() + k + 1, y.end());
          val += scaled_form(xrest, yrest).shifted(prefix);
        }
        prefix += datum_.pairing(i, y[k]);
      }
    }
    return memo_.emplace(std::move(key), std::move(val)).first->second;
  }

  RatFun form(const Word& x, const Word& y) {
    if (x.size() != y.size()) return RatFun();
    return RatFun(scaled_form(x, y), one_minus_v_m2().pow(static_cast<unsigned>(x.size())));
  }

  RatFun form(const FreeElement& x, const FreeElement& y) {
    RatFun s;
    for (auto& [wx, cx] : x.combo())
      for (auto& [wy, cy] : y.combo()) s += cx * cy * form(wx, wy);
    return s;
  }

  // Pairing of a word against a general element, in scaled units:
  // (1-v^-2)^m (w, x) where m is the common length; exact only when the
  // coefficients of x keep the value Laurent-integral is not required,
  // so the result is a RatFun.
  RatFun scaled_pairing(const Word& w, const FreeElement& x) {
    RatFun s;
    for (auto& [wx, cx] : x.combo()) s += cx * RatFun(scaled_form(w, wx));
    return s;
  }

  const GramData& gram(const WeightVector& nu) {
    auto it = grams_.find(nu);
    if (it != grams_.end()) return it->second;
    if (cache_) {
      if (auto text = cache_->get(gram_key(nu))) {
        GramData g = deserialize_gram(*text);
        return grams_.emplace(nu, std::move(g)).first->second;
      }
    }
    GramData g;
    g.degree = nu;
    g.words = words_of_degree(nu);
    const std::size_t n = g.words.size();
    g.scaled.assign(n, std::vector<LaurentPoly>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        g.scaled[a][b] = scaled_form(g.words[a], g.words[b]);
        if (b != a) g.scaled[b][a] = g.scaled[a][b];
      }
    g.rank = bareiss_rank(g.scaled);
    if (cache_) cache_->put(gram_key(nu), serialize_gram(g));
    return grams_.emplace(nu, std::move(g)).first->second;
  }

  std::string gram_key(const WeightVector& nu) const {
    return hash_ + "/gram/" + nu.str();
  }

  static std::string serialize_gram(const GramData& g) {
    std::ostringstream os;
    os << "degree\t" << g.degree.str() << "\n";
    os << "rank\t" << g.rank << "\n";
    os << "words\t" << g.words.size() << "\n";
    for (auto& w : g.words) {
      for (std::size_t k = 0; k < w.size(); ++k) os << (k ? "," : "") << w[k];
      os << "\n";
    }
    os << "matrix\n";
    for (auto& row : g.scaled) {
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "\t" : "") << row[j].str();
      os << "\n";
    }
    return os.str();
  }

  static GramData deserialize_gram(const std::string& text) {
    std::istringstream is(text);
    GramData g;
    std::string tag, rest;
    std::getline(is, rest);
    {
      auto pos = rest.find('\t');
      std::string dstr = rest.substr(pos + 1);
      std::vector<std::int64_t> coords;
      for (std::size_t p = 1; p < dstr.size();) {
        std::size_t q = dstr.find_first_of(",)", p);
        coords.push_back(std::stoll(dstr.substr(p, q - p)));
        p = q + 1;
      }
      g.degree = WeightVector(std::move(coords));
    }
    std::getline(is, rest);
    g.rank = std::stoi(rest.substr(rest.find('\t') + 1));
    std::getline(is, rest);
    std::size_t nwords = std::stoul(rest.substr(rest.find('\t') + 1));
    for (std::size_t k = 0; k < nwords; ++k) {
      std::getline(is, rest);
      Word w;
      for (std::size_t p = 0; p < rest.size();) {
        std::size_t q = rest.find(',', p);
        if (q == std::string::npos) q = rest.size();
        w.push_back(std::stoi(rest.substr(p, q - p)));
        p = q + 1;
      }
      g.words.push_back(std::move(w));
    }
    std::getline(is, rest); // "matrix"
    g.scaled.assign(nwords, std::vector<LaurentPoly>(nwords));
    for (std::size_t a = 0; a < nwords; ++a) {
      std::getline(is, rest);
      std::size_t p = 0;
      for (std::size_t b = 0; b < nwords; ++b) {
        std::size_t q = rest.find('\t', p);
        if (q == std::string::npos) q = rest.size();
        g.scaled[a][b] = LaurentPoly::parse(rest.substr(p, q - p));
        p = q + 1;
      }
    }
    return g;
  }

private:
  CartanDatum datum_;
  std::string hash_;
  KVStore* cache_;
  std::map<std::pair<Word, Word>, LaurentPoly> memo_;
  std::map<WeightVector, GramData> grams_;
};

} // namespace qforge
