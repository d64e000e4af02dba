#include "fuzzymatch/cache.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstring>
#include <ctime>
#include <iostream>

#include "fuzzymatch/errors.hpp"

namespace fuzzymatch::cache {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9')
    return c - '0';
  if (c >= 'a' && c <= 'f')
    return c - 'a' + 10;
  if (c >= 'A' && c <= 'F')
    return c - 'A' + 10;
  return -1;
}

CacheEntry parse_line(const std::string &line) {
  const auto obj = nlohmann::json::parse(line);
  CacheEntry e;
  const auto key = CacheKey::from_hex(obj.at("key_hex").get<std::string>());
  if (!key)
    throw std::invalid_argument("bad key_hex");
  e.key = *key;
  e.score = obj.at("score").get<double>();
  if (!(e.score >= 0.0 && e.score <= 1.0))
    throw std::invalid_argument("score outside [0,1]");
  e.raw_reply = obj.at("raw_reply").get<std::string>();
  e.created_at = obj.at("created_at").get<std::string>();
  return e;
}

} // namespace

CacheKey CacheKey::for_request(std::string_view model_id, double temperature,
                               std::string_view rendered_prompt) {
  char temp[64];
  std::snprintf(temp, sizeof temp, "%.6f", temperature);
  std::string canonical;
  canonical.reserve(model_id.size() + rendered_prompt.size() + 16);
  canonical += model_id;
  canonical += '\x1f';
  canonical += temp;
  canonical += '\x1f';
  canonical += rendered_prompt;
  return CacheKey{sha256(canonical)};
}

std::optional<CacheKey> CacheKey::from_hex(std::string_view hex) {
  CacheKey key;
  if (hex.size() != key.digest.size() * 2)
    return std::nullopt;
  for (std::size_t i = 0; i < key.digest.size(); ++i) {
    const int hi = hex_value(hex[2 * i]), lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      return std::nullopt;
    key.digest[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return key;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::size_t ScoreCache::KeyHash::operator()(const CacheKey &k) const {
  std::size_t h = 0;
  std::memcpy(&h, k.digest.data(), sizeof h);
  return h;
}

ScoreCache::ScoreCache(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in)
      throw CacheError("cannot read cache file " + path_.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      needs_newline_ = in.eof(); // final line had no terminator
      if (line.empty())
        continue;
      try {
        CacheEntry e = parse_line(line);
        entries_.insert_or_assign(e.key, std::move(e));
      } catch (const std::exception &ex) {
        warnings_.push_back(path_.string() + ":" + std::to_string(line_no) +
                            ": skipping unreadable cache line (" + ex.what() +
                            ")");
      }
    }
    if (in.bad())
      throw CacheError("I/O error reading cache file " + path_.string());
  }
  for (const auto &w : warnings_)
    std::cerr << "warning: " << w << '\n';

  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_)
    throw CacheError("cannot open cache file for append: " + path_.string());
}

std::optional<CacheEntry> ScoreCache::get(const CacheKey &key) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end())
    return std::nullopt;
  return it->second;
}

void ScoreCache::put(const CacheEntry &entry) {
  if (!(entry.score >= 0.0 && entry.score <= 1.0))
    throw CacheError("refusing to cache score outside [0,1]");
  nlohmann::json obj = {
      {"key_hex", entry.key.hex()},
      {"score", entry.score},
      {"raw_reply", entry.raw_reply},
      {"created_at", entry.created_at},
  };
  const std::string line =
      obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);

  std::unique_lock lock(mutex_);
  if (needs_newline_) {
    out_ << '\n';
    needs_newline_ = false;
  }
  out_ << line << '\n';
  out_.flush();
  if (!out_)
    throw CacheError("failed to append to cache file " + path_.string());
  entries_.insert_or_assign(entry.key, entry);
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

} // namespace fuzzymatch::cache
