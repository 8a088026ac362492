#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fractal_spectra {

std::uint64_t fnv1a64(std::string_view data);

/// Hex content hash of a module name and a canonical parameter string.
std::string cache_key(std::string_view module, std::string_view params);

inline constexpr const char* kCacheEnvVar = "FRACTAL_SPECTRA_CACHE";

/// Explicit path if given, else $FRACTAL_SPECTRA_CACHE, else
/// $XDG_CACHE_HOME/fractal-spectra or ~/.cache/fractal-spectra.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& explicit_dir);

/// JSON files <key>.json holding {"key": ..., "payload": ...}. Failures never
/// throw: they disable the cache or miss, and leave a warning.
class Cache {
 public:
  explicit Cache(std::optional<std::filesystem::path> dir);

  bool enabled() const { return dir_.has_value(); }
  std::optional<std::string> get(const std::string& key);
  void put(const std::string& key, const std::string& payload);
  /// Report a payload that could not be decoded; it will be overwritten.
  void reject(const std::string& key, const std::string& why);

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::filesystem::path file_for(const std::string& key) const;

  std::optional<std::filesystem::path> dir_;
  std::vector<std::string> warnings_;
};

}  // namespace fractal_spectra
