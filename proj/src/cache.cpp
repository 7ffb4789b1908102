#include "gphom/cache.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "gphom/errors.hpp"

namespace gphom {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
    throw Error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

ResultCache::ResultCache(fs::path dir, std::string code_version)
    : dir_(std::move(dir)), version_(std::move(code_version)) {
  if (enabled()) fs::create_directories(dir_);
}

fs::path ResultCache::default_dir() {
  if (const char* env = std::getenv("GPHOM_CACHE_DIR"); env && *env) return env;
  return ".gphom-cache";
}

std::string ResultCache::key(const std::string& kind, const std::string& params) const {
  return sha256_hex(version_ + '\n' + kind + '\n' + params);
}

fs::path ResultCache::path_of(const std::string& key) const { return dir_ / (key + ".entry"); }

void ResultCache::warn(const std::string& msg) {
  warnings_.push_back(msg);
  std::cerr << "warning: " << msg << "\n";
}

// Entry layout: "gphom-cache <version> <sha256 of payload> <payload bytes>\n" then the payload.
std::optional<std::string> ResultCache::get(const std::string& key) {
  if (!enabled()) {
    ++misses_;
    return std::nullopt;
  }
  fs::path path = path_of(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ++misses_;
    return std::nullopt;
  }
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, version, checksum;
  std::size_t size = 0;
  hs >> magic >> version >> checksum >> size;
  std::string payload;
  if (hs && magic == "gphom-cache") {
    payload.resize(size);
    in.read(payload.data(), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in.gcount()) != size || in.peek() != std::char_traits<char>::eof())
      checksum.clear();
  }
  if (!hs || magic != "gphom-cache" || sha256_hex(payload) != checksum) {
    ++corrupt_;
    ++misses_;
    warn("cache entry " + path.string() + " failed its checksum; recomputing");
    in.close();
    std::error_code ec;
    fs::remove(path, ec);
    return std::nullopt;
  }
  if (version != version_) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return payload;
}

void ResultCache::put(const std::string& key, const std::string& value) {
  if (!enabled()) return;
  fs::path path = path_of(key);
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cache: cannot write " + tmp.string());
    out << "gphom-cache " << version_ << ' ' << sha256_hex(value) << ' ' << value.size() << '\n';
    out.write(value.data(), static_cast<std::streamsize>(value.size()));
    if (!out) throw Error("cache: short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::optional<ExactMatrix> ResultCache::get_matrix(const std::string& key) {
  auto s = get(key);
  if (!s) return std::nullopt;
  try {
    return from_coordinate_string(*s);
  } catch (const Error& e) {
    ++corrupt_;
    warn("cache entry " + path_of(key).string() + " is not a coordinate matrix (" + e.what() + ")");
    return std::nullopt;
  }
}

void ResultCache::put_matrix(const std::string& key, const ExactMatrix& m) { put(key, to_coordinate_string(m)); }

}  // namespace gphom
