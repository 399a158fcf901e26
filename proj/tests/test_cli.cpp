#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include <qforge/runner.hpp>

using namespace qforge;

namespace {

std::filesystem::path fresh_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() /
           ("qforge-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

const char* kGoodConfig = R"(# two-vertex chain
[graph]
vertices = [1, 2]
edges = [1-2]

[task]
kind = verify
depth = 3
block = {1=1, 2=0}
block = {2=1}   # second block, vertex 1 defaults to zero

[output]
basename = chain
)";

} // namespace

TEST_CASE("config parsing") {
  JobConfig job = parse_config(kGoodConfig);
  CHECK(job.vertices == std::vector<std::string>{"1", "2"});
  REQUIRE(job.edges.size() == 1);
  CHECK(job.edges[0] == std::pair<std::string, std::string>{"1", "2"});
  CHECK(job.kind == "verify");
  CHECK(job.depth == 3);
  REQUIRE(job.blocks.size() == 2);
  CHECK(job.blocks[0] == WeightMap{{"1", 1}, {"2", 0}});
  CHECK(job.blocks[1] == WeightMap{{"2", 1}});
  CHECK(job.basename == "chain");
  CartanDatum d = job.datum();
  CHECK(job.resolve(job.blocks[1], d) == WeightVector({0, 1}));
  validate_config(job);
}

TEST_CASE("config parse errors carry line and column") {
  auto fails_at = [](const std::string& text, int line) {
    try {
      parse_config(text);
      FAIL_CHECK("expected ConfigError for: " << text);
    } catch (const ConfigError& e) {
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).rfind("config:", 0) == 0);
    }
  };
  fails_at("[graph]\nvertices = [1]\ncolour = red\n", 3);          // unknown key
  fails_at("[graph]\nvertices = [1]\nedges = [12]\n", 3);          // malformed edge
  fails_at("vertices = [1]\n", 1);                                 // key outside a section
  fails_at("[shape]\n", 1);                                        // unknown section
  fails_at("[task]\nkind = fancy\n", 2);                           // unknown kind
  fails_at("[graph]\nvertices = [1] oops\n", 2);                   // trailing text
  fails_at("[task]\nblock = {1=1, 1=2}\nkind = dims\n"
           "vertices = [1]\n", 2);                                 // duplicate vertex
  CHECK_THROWS_AS(parse_config("[graph]\nvertices = [1]\n"), ConfigError);  // missing kind
  CHECK_THROWS_AS(parse_config("[task]\nkind = dims\n"), ConfigError);      // missing vertices
}

TEST_CASE("config validation") {
  auto invalid = [](const std::string& text) {
    JobConfig job = parse_config(text);
    CHECK_THROWS_AS(validate_config(job), ConfigError);
  };
  // Loop edges are rejected by the graph model.
  invalid("[graph]\nvertices = [1]\nedges = [1-1]\n[task]\nkind = verify\nblock = {1=1}\n");
  // Weight maps must reference declared vertices.
  invalid("[graph]\nvertices = [1]\n[task]\nkind = verify\nblock = {2=1}\n");
  // Simple-factor weights must be dominant.
  invalid("[graph]\nvertices = [1]\n[task]\nkind = dims\nweight = {1=-1}\n");
  // Required keys per kind.
  invalid("[graph]\nvertices = [1]\n[task]\nkind = dims\n");
  invalid("[graph]\nvertices = [1]\n[task]\nkind = crystal\n");
  invalid("[graph]\nvertices = [1]\n[task]\nkind = tensor\n");
  invalid("[graph]\nvertices = [1]\n[task]\nkind = cb\nlambda1 = {1=1}\n");
  // Verma factors may carry any integer tag.
  JobConfig ok = parse_config(
      "[graph]\nvertices = [1]\n[task]\nkind = crystal\nfactor = verma {1=-2}\n");
  validate_config(ok);
}

TEST_CASE("disk cache roundtrip, miss, and corruption") {
  auto dir = fresh_dir("cache");
  DiskCache cache(dir);
  CHECK(!cache.get("abc/gram/(1)").has_value());
  cache.put("abc/gram/(1)", "payload-1");
  cache.put("abc/gram/(2)", "payload-2\nwith second line");
  CHECK(cache.get("abc/gram/(1)") == std::optional<std::string>("payload-1"));
  CHECK(cache.get("abc/gram/(2)") == std::optional<std::string>("payload-2\nwith second line"));

  // Corrupt one entry on disk: the cache warns, drops it, and reports a miss.
  std::filesystem::path victim;
  for (auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && slurp(e.path()).find("payload-1") != std::string::npos)
      victim = e.path();
  REQUIRE(!victim.empty());
  std::ofstream(victim, std::ios::binary | std::ios::trunc) << "abc/gram/(1)\nDEADBEEF\npayload-1";
  CHECK(!cache.get("abc/gram/(1)").has_value());
  CHECK(!std::filesystem::exists(victim));
  CHECK(cache.get("abc/gram/(2)").has_value());

  // Environment override wins over the default location.
  ::setenv(kCacheEnvVar, dir.c_str(), 1);
  CHECK(DiskCache::resolve_dir("/elsewhere") == dir);
  ::unsetenv(kCacheEnvVar);
  CHECK(DiskCache::resolve_dir("/elsewhere") == std::filesystem::path("/elsewhere/.qforge-cache"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache accelerates and does not change results") {
  auto dir = fresh_dir("cache-forms");
  CartanDatum d({"1", "2"}, {{"1", "2"}});
  WeightVector nu({2, 1});
  int dim_cold, dim_warm;
  {
    DiskCache cache(dir);
    UqMinus u(d, &cache);
    dim_cold = u.dim(nu);
  }
  {
    DiskCache cache(dir);
    UqMinus u(d, &cache);
    dim_warm = u.dim(nu);
  }
  UqMinus plain(d);
  CHECK(dim_cold == plain.dim(nu));
  CHECK(dim_warm == dim_cold);
  std::filesystem::remove_all(dir);
}

TEST_CASE("runner: dims task") {
  auto dir = fresh_dir("dims");
  JobConfig job = parse_config(
      "[graph]\nvertices = [1]\n[task]\nkind = dims\ndepth = 3\nweight = {1=1}\n");
  RunReport rep = Runner(job, dir, nullptr).run();
  REQUIRE(rep.artifacts == std::vector<std::string>{"qforge.dims.tsv"});
  const std::string tsv = slurp(dir / "qforge.dims.tsv");
  // V_1 of the one-vertex graph is two-dimensional: dims 1, 1, 0, 0.
  CHECK(tsv == "nu\tdim_u_minus\tdim_t\tdim_v\n"
               "(0)\t1\t0\t1\n"
               "(1)\t1\t0\t1\n"
               "(2)\t1\t1\t0\n"
               "(3)\t1\t1\t0\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("runner: crystal task") {
  auto dir = fresh_dir("crystal");
  JobConfig job = parse_config(
      "[graph]\nvertices = [1, 2]\nedges = [1-2]\n"
      "[task]\nkind = crystal\ndepth = 3\nfactor = simple {1=1}\n");
  RunReport rep = Runner(job, dir, nullptr).run();
  REQUIRE(rep.artifacts.size() == 2);
  const std::string dot = slurp(dir / "qforge.crystal.dot");
  // B((1,0)) on the two-vertex chain has three nodes and two arrows.
  CHECK(std::count(dot.begin(), dot.end(), '>') == 2);
  auto j = nlohmann::json::parse(slurp(dir / "qforge.crystal.json"));
  int nodes = 0;
  for (auto& w : j["weights"]) nodes += static_cast<int>(w["nodes"].size());
  CHECK(nodes == 3);
  CHECK(j["edges"].size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("runner: tensor task") {
  auto dir = fresh_dir("tensor");
  JobConfig job = parse_config(
      "[graph]\nvertices = [1]\n[task]\nkind = tensor\ndepth = 3\n"
      "block = {1=1}\nblock = {1=1}\n");
  RunReport rep = Runner(job, dir, nullptr).run();
  const std::string tsv = slurp(dir / "qforge.tensor.tsv");
  CHECK(tsv.rfind("span\tnu\tdim\ttensor_dim\tstatus\n", 0) == 0);
  // Two variants times four degrees; every plain-K row is an equality at
  // N = 2 (the K' rows are only bounded above).
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 9);
  std::istringstream lines(tsv);
  std::string row;
  std::getline(lines, row);  // header
  while (std::getline(lines, row)) {
    const std::string span = row.substr(0, row.find('\t'));
    if (span.find('\'') == std::string::npos)
      CHECK(row.substr(row.rfind('\t') + 1) == "eq");
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("runner: cb task") {
  auto dir = fresh_dir("cb");
  JobConfig job = parse_config(
      "[graph]\nvertices = [1]\n[task]\nkind = cb\ndepth = 2\n"
      "lambda1 = {1=1}\nlambda2 = {1=1}\n");
  RunReport rep = Runner(job, dir, nullptr).run();
  auto j = nlohmann::json::parse(slurp(dir / "qforge.cb.json"));
  REQUIRE(j["depths"].size() == 3);
  // Depth one reproduces the worked example, certificates included.
  auto& els = j["depths"][1]["elements"];
  REQUIRE(els.size() == 2);
  CHECK(els[0]["coords"] == nlohmann::json({"1", "0"}));
  CHECK(els[1]["coords"] == nlohmann::json({"v^-1", "1"}));
  for (auto& el : els) {
    CHECK(el["integral"] == true);
    CHECK(el["invariant"] == true);
    CHECK(el["norm"] == true);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("runner: verify task passes and honors the fault hook") {
  auto dir = fresh_dir("verify");
  JobConfig job = parse_config(kGoodConfig);
  job.depth = 2;
  RunReport rep = Runner(job, dir, nullptr).run();
  CHECK(rep.all_pass());
  REQUIRE(!rep.checks.empty());
  const std::string tsv = slurp(dir / "chain.verify.tsv");
  for (auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
    CHECK(tsv.find(c.name + "\tpass\t") != std::string::npos);
  }

  // With the raising action corrupted, the commutator check (and only the
  // checks that exercise it) must fail.
  ::setenv(kFaultEnvVar, "e_action", 1);
  RunReport bad = Runner(job, dir, nullptr).run();
  ::unsetenv(kFaultEnvVar);
  CHECK(!bad.all_pass());
  for (auto& c : bad.checks)
    if (c.name == "commutator") CHECK(!c.pass);
  std::filesystem::remove_all(dir);
}
