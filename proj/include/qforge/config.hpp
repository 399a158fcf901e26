// Job configuration: the documented key-value format with sections
// [graph], [task], [output]; lists in brackets, weight maps as
// vertex=value pairs in braces.  Parse errors carry line and column.
#pragma once

#include <cctype>
#include <cstring>
#include <map>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "qforge/cartan.hpp"

namespace qforge {

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string message, int line, int col)
      : std::runtime_error("config:" + std::to_string(line) + ":" + std::to_string(col) +
                           ": " + message),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_, col_;
};

using WeightMap = std::map<std::string, std::int64_t>;

struct FactorSpec {
  bool verma = false;  // verma{...} vs simple{...}
  WeightMap weight;
};

struct JobConfig {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string kind;  // dims | crystal | tensor | cb | verify
  std::int64_t depth = 4;
  std::optional<WeightMap> weight;      // dims
  std::vector<FactorSpec> factors;      // crystal
  std::vector<WeightMap> blocks;        // tensor / verify
  std::optional<WeightMap> lambda2, lambda1;  // cb
  std::string basename = "qforge";

  CartanDatum datum() const { return CartanDatum(vertices, edges); }

  WeightVector resolve(const WeightMap& m, const CartanDatum& d) const {
    WeightVector w = WeightVector::zero(d.size());
    for (auto& [name, value] : m) w[d.vertex_index(name)] = value;
    return w;
  }
};

namespace detail {

struct ConfigCursor {
  const std::string& text;
  int line;

  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_space();
    return pos >= text.size();
  }
  int col() const { return static_cast<int>(pos) + 1; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(msg, line, col());
  }

  std::string token(const char* extra = "") {
    skip_space();
    const std::size_t start = pos;
    auto ok = [&](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' ||
             c == '-' || std::strchr(extra, c) != nullptr;
    };
    while (pos < text.size() && ok(text[pos])) ++pos;
    if (pos == start) fail("expected a token");
    return text.substr(start, pos - start);
  }

  void expect(char c) {
    skip_space();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool peek(char c) {
    skip_space();
    return pos < text.size() && text[pos] == c;
  }

  std::int64_t integer() {
    std::string t = token();
    try {
      std::size_t used = 0;
      std::int64_t val = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return val;
    } catch (const std::exception&) {
      fail("expected an integer, got '" + t + "'");
    }
  }

  // [a, b, c] — items are bare tokens.
  std::vector<std::string> list() {
    std::vector<std::string> out;
    expect('[');
    if (!peek(']'))
      while (true) {
        out.push_back(token());
        if (peek(']')) break;
        expect(',');
      }
    expect(']');
    return out;
  }

  // {vertex=value, ...}
  WeightMap weight_map() {
    WeightMap out;
    expect('{');
    if (!peek('}'))
      while (true) {
        std::string name = token();
        expect('=');
        std::int64_t value = integer();
        if (!out.emplace(name, value).second) fail("duplicate vertex '" + name + "'");
        if (peek('}')) break;
        expect(',');
      }
    expect('}');
    return out;
  }
};

} // namespace detail

inline JobConfig parse_config(const std::string& text) {
  JobConfig job;
  bool saw_vertices = false, saw_kind = false;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    detail::ConfigCursor cur{line, line_no};
    if (cur.done()) continue;
    if (cur.peek('[')) {
      cur.expect('[');
      section = cur.token();
      cur.expect(']');
      if (!cur.done()) cur.fail("trailing text after section header");
      if (section != "graph" && section != "task" && section != "output")
        throw ConfigError("unknown section '" + section + "'", line_no, 1);
      continue;
    }
    if (section.empty()) cur.fail("key outside any section");
    std::string key = cur.token();
    cur.expect('=');
    auto unknown = [&]() { cur.fail("unknown key '" + key + "' in [" + section + "]"); };
    if (section == "graph") {
      if (key == "vertices") {
        job.vertices = cur.list();
        saw_vertices = true;
      } else if (key == "edges") {
        for (auto& item : cur.list()) {
          const auto dash = item.find('-');
          if (dash == std::string::npos || dash == 0 || dash + 1 == item.size())
            cur.fail("edge '" + item + "' is not of the form a-b");
          job.edges.emplace_back(item.substr(0, dash), item.substr(dash + 1));
        }
      } else {
        unknown();
      }
    } else if (section == "task") {
      if (key == "kind") {
        job.kind = cur.token();
        saw_kind = true;
        if (job.kind != "dims" && job.kind != "crystal" && job.kind != "tensor" &&
            job.kind != "cb" && job.kind != "verify")
          cur.fail("unknown task kind '" + job.kind + "'");
      } else if (key == "depth") {
        job.depth = cur.integer();
        if (job.depth < 0) cur.fail("depth must be nonnegative");
      } else if (key == "weight") {
        job.weight = cur.weight_map();
      } else if (key == "factor") {
        FactorSpec f;
        std::string kind = cur.token();
        if (kind == "verma")
          f.verma = true;
        else if (kind != "simple")
          cur.fail("factor kind must be 'simple' or 'verma'");
        f.weight = cur.weight_map();
        job.factors.push_back(std::move(f));
      } else if (key == "block") {
        job.blocks.push_back(cur.weight_map());
      } else if (key == "lambda1") {
        job.lambda1 = cur.weight_map();
      } else if (key == "lambda2") {
        job.lambda2 = cur.weight_map();
      } else {
        unknown();
      }
    } else {
      if (key == "basename")
        job.basename = cur.token(".");
      else
        unknown();
    }
    if (!cur.done()) cur.fail("trailing text after value");
  }
  if (!saw_vertices) throw ConfigError("missing [graph] vertices", line_no, 1);
  if (!saw_kind) throw ConfigError("missing [task] kind", line_no, 1);
  return job;
}

// Structural validation beyond syntax: vertex references, loop edges,
// dominance where a simple factor is requested, per-kind required keys.
inline void validate_config(const JobConfig& job) {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid field: " + msg, 0, 0); };
  CartanDatum d = [&]() {
    try {
      return job.datum();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("invalid field: graph: ") + e.what(), 0, 0);
    }
  }();
  auto check_map = [&](const WeightMap& m, const std::string& what, bool dominant) {
    for (auto& [name, value] : m) {
      if (!d.has_vertex(name)) fail(what + ": unknown vertex '" + name + "'");
      if (dominant && value < 0) fail(what + ": weight must be dominant");
    }
  };
  if (job.kind == "dims") {
    if (!job.weight) fail("dims task needs weight");
    check_map(*job.weight, "weight", true);
  } else if (job.kind == "crystal") {
    if (job.factors.empty()) fail("crystal task needs at least one factor");
    for (auto& f : job.factors) check_map(f.weight, "factor", !f.verma);
  } else if (job.kind == "tensor" || job.kind == "verify") {
    if (job.blocks.empty()) fail(job.kind + " task needs at least one block");
    for (auto& b : job.blocks) check_map(b, "block", true);
  } else if (job.kind == "cb") {
    if (!job.lambda1 || !job.lambda2) fail("cb task needs lambda1 and lambda2");
    check_map(*job.lambda1, "lambda1", true);
    check_map(*job.lambda2, "lambda2", true);
  }
}

} // namespace qforge
