#include "fractal_spectra/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace fractal_spectra {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_key(std::string_view module, std::string_view params) {
  std::string text(module);
  text += '\n';
  text += params;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& explicit_dir) {
  if (explicit_dir && !explicit_dir->empty()) return std::filesystem::path(*explicit_dir);
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return std::filesystem::path(env);
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "fractal-spectra";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "fractal-spectra";
  }
  return std::nullopt;
}

Cache::Cache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
  if (!dir_) return;
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  const auto probe = *dir_ / ".write-probe";
  std::ofstream out(probe);
  if (ec || !out) {
    warnings_.push_back("cache directory " + dir_->string() + " is not writable; caching disabled");
    dir_.reset();
    return;
  }
  out.close();
  std::filesystem::remove(probe, ec);
}

std::filesystem::path Cache::file_for(const std::string& key) const { return *dir_ / (key + ".json"); }

std::optional<std::string> Cache::get(const std::string& key) {
  if (!dir_) return std::nullopt;
  const auto path = file_for(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    const auto j = nlohmann::json::parse(buf.str());
    if (j.at("key").get<std::string>() != key) {
      warnings_.push_back("cache entry " + path.string() + " has a mismatched key; recomputing");
      return std::nullopt;
    }
    return j.at("payload").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    warnings_.push_back("cache entry " + path.string() + " is corrupt; recomputing");
    return std::nullopt;
  }
}

void Cache::put(const std::string& key, const std::string& payload) {
  if (!dir_) return;
  const auto path = file_for(key);
  const auto tmp = *dir_ / (key + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) {
      warnings_.push_back("could not write cache entry " + path.string());
      return;
    }
    out << nlohmann::json{{"key", key}, {"payload", payload}}.dump();
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) warnings_.push_back("could not write cache entry " + path.string());
}

void Cache::reject(const std::string& key, const std::string& why) {
  warnings_.push_back("cache entry " + key + " rejected (" + why + "); recomputing");
}

}  // namespace fractal_spectra
