#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fuzzymatch/sha256.hpp"

namespace fuzzymatch::cache {

// SHA-256 of the canonical tuple
//   model_id 0x1F temperature("%.6f") 0x1F rendered_prompt
struct CacheKey {
  Sha256Digest digest{};

  static CacheKey for_request(std::string_view model_id, double temperature,
                              std::string_view rendered_prompt);
  static std::optional<CacheKey> from_hex(std::string_view hex);
  std::string hex() const { return to_hex(digest); }

  bool operator==(const CacheKey &) const = default;
};

struct CacheEntry {
  CacheKey key;
  double score = 0.0;
  std::string raw_reply;
  std::string created_at; // RFC 3339, UTC

  bool operator==(const CacheEntry &) const = default;
};

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

// Append-only JSON-lines score store. Lines that fail to parse (typically a
// torn final write) are skipped and reported through warnings(). Safe for
// concurrent get/put within one process; no cross-process locking.
class ScoreCache {
public:
  // Opens or creates the store at `path`. Throws CacheError on I/O failure.
  explicit ScoreCache(std::filesystem::path path);

  ScoreCache(const ScoreCache &) = delete;
  ScoreCache &operator=(const ScoreCache &) = delete;

  std::optional<CacheEntry> get(const CacheKey &key) const;
  // Appends and flushes. Last write wins for duplicate keys.
  void put(const CacheEntry &entry);

  std::size_t size() const;
  const std::vector<std::string> &warnings() const { return warnings_; }
  const std::filesystem::path &path() const { return path_; }

private:
  struct KeyHash {
    std::size_t operator()(const CacheKey &k) const;
  };

  std::filesystem::path path_;
  std::unordered_map<CacheKey, CacheEntry, KeyHash> entries_;
  std::vector<std::string> warnings_;
  std::ofstream out_;
  bool needs_newline_ = false;
  mutable std::shared_mutex mutex_;
};

} // namespace fuzzymatch::cache
