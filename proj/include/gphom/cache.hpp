#pragma once

// On-disk result cache keyed by SHA-256 of (code version, kind, parameters).
// Entries carry a checksum of their payload and are replaced atomically.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gphom/exactalg.hpp"

namespace gphom {

inline constexpr const char* kCodeVersion = "gphom-1.0.0";

std::string sha256_hex(const std::string& data);

class ResultCache {
 public:
  // An empty directory disables the cache: every get misses, put is a no-op.
  explicit ResultCache(std::filesystem::path dir, std::string code_version = kCodeVersion);

  // $GPHOM_CACHE_DIR if set, otherwise ".gphom-cache" in the working directory.
  static std::filesystem::path default_dir();

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& dir() const { return dir_; }
  const std::string& code_version() const { return version_; }

  std::string key(const std::string& kind, const std::string& params) const;
  std::filesystem::path path_of(const std::string& key) const;

  // A corrupt or unreadable entry is reported as a warning, removed, and
  // treated as a miss.
  std::optional<std::string> get(const std::string& key);
  void put(const std::string& key, const std::string& value);

  std::optional<ExactMatrix> get_matrix(const std::string& key);
  void put_matrix(const std::string& key, const ExactMatrix& m);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t corrupt() const { return corrupt_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::filesystem::path dir_;
  std::string version_;
  std::size_t hits_ = 0, misses_ = 0, corrupt_ = 0;
  std::vector<std::string> warnings_;

  void warn(const std::string& msg);
};

}  // namespace gphom
