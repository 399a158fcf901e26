// Loop-free graphs, framing, and the symmetric Cartan pairing of the
// simply connected root datum.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qforge {

// Suffix marking a framing vertex i+ of the framed graph.
inline constexpr const char* kFramingSuffix = "+";

// A loop-free graph with ordered vertex list and edge multiset, plus the
// derived symmetric pairing (i, alpha_j) = 2 delta_ij - m_ij.
class CartanDatum {
public:
  CartanDatum(std::vector<std::string> vertices,
              std::vector<std::pair<std::string, std::string>> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (std::size_t k = 0; k < vertices_.size(); ++k) {
      if (index_.count(vertices_[k]))
        throw std::invalid_argument("CartanDatum: duplicate vertex " + vertices_[k]);
      index_[vertices_[k]] = static_cast<int>(k);
    }
    const int n = size();
    cartan_.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) cartan_[i][i] = 2;
    for (auto& [a, b] : edges_) {
      auto ia = index_.find(a);
      auto ib = index_.find(b);
      if (ia == index_.end()) throw std::invalid_argument("CartanDatum: unknown vertex " + a);
      if (ib == index_.end()) throw std::invalid_argument("CartanDatum: unknown vertex " + b);
      if (ia->second == ib->second)
        throw std::invalid_argument("CartanDatum: loop edge at " + a);
      cartan_[ia->second][ib->second] -= 1;
      cartan_[ib->second][ia->second] -= 1;
    }
  }

  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }
  const std::string& vertex_name(int i) const { return vertices_.at(i); }
  int vertex_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("CartanDatum: unknown vertex " + name);
    return it->second;
  }
  bool has_vertex(const std::string& name) const { return index_.count(name) != 0; }

  // (i, alpha_j)
  int pairing(int i, int j) const { return cartan_.at(i).at(j); }

  // Canonical serialization; feeds the content hash used as cache key.
  std::string canonical_string() const {
    std::string s = "vertices:";
    for (auto& u : vertices_) s += u + ";";
    s += "|edges:";
    std::vector<std::pair<int, int>> es;
    for (auto& [a, b] : edges_) {
      int ia = vertex_index(a), ib = vertex_index(b);
      es.emplace_back(std::min(ia, ib), std::max(ia, ib));
    }
    std::sort(es.begin(), es.end());
    for (auto& [a, b] : es) s += vertices_[a] + "-" + vertices_[b] + ";";
    return s;
  }

private:
  std::vector<std::string> vertices_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> cartan_;
};

// The framed graph: vertex set I | I+, original edges plus one edge {i, i+}
// per original vertex.  Framing vertices are named by suffixing "+".
inline CartanDatum frame(const CartanDatum& datum) {
  std::vector<std::string> verts = datum.vertices();
  auto taken = [&](const std::string& name) {
    return std::find(verts.begin(), verts.end(), name) != verts.end();
  };
  auto edges = datum.edges();
  for (auto& u : datum.vertices()) {
    // Fresh name even when the datum is already framed.
    std::string fu = u + kFramingSuffix;
    while (taken(fu)) fu += kFramingSuffix;
    verts.push_back(fu);
    edges.emplace_back(u, fu);
  }
  return CartanDatum(std::move(verts), std::move(edges));
}

// A vector of integers indexed by the vertices of a datum.  Used both for
// weights lambda in X, recorded by the values (i, lambda), and for gradings
// nu in N[I] (nonnegative coordinates).
class WeightVector {
public:
  WeightVector() = default;
  explicit WeightVector(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  static WeightVector zero(int n) { return WeightVector(std::vector<std::int64_t>(n, 0)); }
  static WeightVector alpha(int n, int i) {
    WeightVector w = zero(n);
    w.coords_[i] = 1;
    return w;
  }

  int size() const { return static_cast<int>(coords_.size()); }
  std::int64_t operator[](int i) const { return coords_.at(i); }
  std::int64_t& operator[](int i) { return coords_.at(i); }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
  }
  bool nonnegative() const {
    return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c >= 0; });
  }
  std::int64_t height() const {
    std::int64_t h = 0;
    for (auto c : coords_) h += c;
    return h;
  }

  WeightVector& operator+=(const WeightVector& o) {
    require_same_size(o);
    for (int i = 0; i < size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  WeightVector& operator-=(const WeightVector& o) {
    require_same_size(o);
    for (int i = 0; i < size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  friend WeightVector operator+(WeightVector a, const WeightVector& b) { return a += b; }
  friend WeightVector operator-(WeightVector a, const WeightVector& b) { return a -= b; }

  friend bool operator==(const WeightVector& a, const WeightVector& b) { return a.coords_ == b.coords_; }
  friend bool operator!=(const WeightVector& a, const WeightVector& b) { return !(a == b); }
  friend bool operator<(const WeightVector& a, const WeightVector& b) { return a.coords_ < b.coords_; }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < size(); ++i) {
      if (i) s += ",";
      s += std::to_string(coords_[i]);
    }
    return s + ")";
  }

private:
  std::vector<std::int64_t> coords_;
  void require_same_size(const WeightVector& o) const {
    if (o.size() != size()) throw std::invalid_argument("WeightVector: size mismatch");
  }
};

// (i, nu) for nu in N[I] embedded in X: sum_j nu_j (i, alpha_j).
inline std::int64_t pairing_with_grading(const CartanDatum& datum, int i, const WeightVector& nu) {
  std::int64_t s = 0;
  for (int j = 0; j < datum.size(); ++j) s += nu[j] * datum.pairing(i, j);
  return s;
}

// The weight lambda - nu, as the value vector ((i, lambda - nu))_i.
// lambda is X-flagged (values), nu is N[I]-flagged (coordinates).
inline WeightVector weight_of(const CartanDatum& datum, const WeightVector& lambda,
                              const WeightVector& nu) {
  WeightVector out = WeightVector::zero(datum.size());
  for (int i = 0; i < datum.size(); ++i)
    out[i] = lambda[i] - pairing_with_grading(datum, i, nu);
  return out;
}

inline bool is_dominant(const WeightVector& lambda) { return lambda.nonnegative(); }

// FNV-1a, stable across platforms; keys the on-disk cache.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline std::string datum_hash(const CartanDatum& datum) {
  return fnv1a_hex(datum.canonical_string());
}

} // namespace qforge
