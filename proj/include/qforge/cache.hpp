// On-disk key/value cache: content-addressed files with checksummed
// payloads and atomic writes.  Corrupt entries are dropped with a warning
// so callers transparently recompute.
#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qforge/freealg.hpp"

namespace qforge {

inline constexpr const char* kCacheEnvVar = "QFORGE_CACHE_DIR";

class DiskCache : public KVStore {
public:
  explicit DiskCache(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
  }

  // The environment override, else a dot-directory under the given base.
  static std::filesystem::path resolve_dir(const std::filesystem::path& base) {
    if (const char* env = std::getenv(kCacheEnvVar); env && *env) return env;
    return base / ".qforge-cache";
  }

  const std::filesystem::path& root() const { return root_; }

  std::optional<std::string> get(const std::string& key) override {
    const std::filesystem::path p = path_for(key);
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::string stored_key, checksum;
    if (!std::getline(in, stored_key) || !std::getline(in, checksum)) return corrupt(p);
    std::ostringstream body;
    body << in.rdbuf();
    std::string value = body.str();
    if (stored_key != key || checksum != fnv1a_hex(value)) return corrupt(p);
    return value;
  }

  void put(const std::string& key, const std::string& value) override {
    const std::filesystem::path p = path_for(key);
    std::filesystem::create_directories(p.parent_path());
    const std::filesystem::path tmp = p.string() + ".tmp" + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << key << "\n" << fnv1a_hex(value) << "\n" << value;
    }
    std::filesystem::rename(tmp, p);  // atomic publish
  }

private:
  std::filesystem::path root_;

  // Keys look like "<datum-hash>/<kind>/<params>"; the first component
  // becomes a directory, the rest is hashed into the file name.
  std::filesystem::path path_for(const std::string& key) const {
    const auto slash = key.find('/');
    const std::string head = slash == std::string::npos ? "misc" : key.substr(0, slash);
    const std::string rest = slash == std::string::npos ? key : key.substr(slash + 1);
    return root_ / head / (fnv1a_hex(rest) + ".kv");
  }

  std::optional<std::string> corrupt(const std::filesystem::path& p) {
    std::cerr << "qforge: warning: dropping corrupt cache entry " << p.string()
              << "; recomputing\n";
    std::error_code ec;
    std::filesystem::remove(p, ec);
    return std::nullopt;
  }
};

} // namespace qforge
