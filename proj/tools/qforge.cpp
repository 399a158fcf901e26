// Command-line front end: runs one configured job and writes its artifacts.
//
// Exit codes: 0 on success (and all verify checks passing), 1 when a
// mathematical check fails, 2 on usage or configuration errors.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <qforge/runner.hpp>

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"qforge: exact computations for quantized enveloping algebras of graphs"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::optional<std::int64_t> depth_override;
  bool no_cache = false;

  std::map<std::string, std::string> kinds = {
      {"dims", "Graded dimensions of the negative half, the submodule, and the simple quotient"},
      {"crystal", "Generate a tensor-product crystal and export DOT and JSON"},
      {"tensor", "Framed graded-dimension comparison report"},
      {"cb", "Canonical elements of a based tensor product, with certificates"},
      {"verify", "Run the named identity checks and report pass/fail"},
  };
  std::vector<CLI::App*> subs;
  for (auto& [name, desc] : kinds) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("-c,--config", config_path, "Job configuration file")->required();
    sub->add_option("-d,--depth", depth_override, "Override the configured depth");
    sub->add_option("-o,--out", out_dir, "Output directory (default: current directory)");
    sub->add_flag("--no-cache", no_cache, "Disable the on-disk form cache");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string sub_name = app.get_subcommands().front()->get_name();

  auto text = slurp(config_path);
  if (!text) {
    std::cerr << "qforge: error: cannot read config file '" << config_path << "'\n";
    return 2;
  }

  try {
    qforge::JobConfig job = qforge::parse_config(*text);
    if (job.kind != sub_name) {
      std::cerr << "qforge: error: subcommand '" << sub_name << "' does not match task kind '"
                << job.kind << "' in " << config_path << "\n";
      return 2;
    }
    if (depth_override) job.depth = *depth_override;
    qforge::validate_config(job);

    std::unique_ptr<qforge::DiskCache> cache;
    if (!no_cache) cache = std::make_unique<qforge::DiskCache>(qforge::DiskCache::resolve_dir(out_dir));

    qforge::Runner runner(std::move(job), out_dir, cache.get());
    qforge::RunReport rep = runner.run();

    for (auto& c : rep.checks)
      std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  (" << c.detail << ")\n";
    for (auto& a : rep.artifacts) std::cout << "wrote " << (std::filesystem::path(out_dir) / a).string() << "\n";
    if (!rep.all_pass()) {
      std::cerr << "qforge: verification failed\n";
      return 1;
    }
    return 0;
  } catch (const qforge::ConfigError& e) {
    std::cerr << "qforge: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qforge: error: " << e.what() << "\n";
    return 1;
  }
}
