#include "fuzzymatch/provider.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/sha256.hpp"

namespace fuzzymatch::llm {

std::string ChatRequest::prompt_text() const {
  if (system.empty())
    return user;
  return system + "\n\n" + user;
}

MockProvider MockProvider::hashing() {
  return MockProvider([](std::string_view prompt) {
    const auto digest = sha256(prompt);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v = (v << 8) | digest[i];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f",
                  static_cast<double>(v >> 11) / static_cast<double>(1ULL << 53));
    return std::string(buf);
  });
}

MockProvider MockProvider::constant(std::string reply) {
  return MockProvider([reply = std::move(reply)](std::string_view) { return reply; });
}

std::string MockProvider::complete(const ChatRequest &request) {
  return reply_(request.prompt_text());
}

ReplayProvider ReplayProvider::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open replay fixture: " + path);
  std::unordered_map<std::string, std::string> replies;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      replies[obj.at("prompt_sha256").get<std::string>()] =
          obj.at("reply").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": invalid replay record: " + e.what());
    }
  }
  return ReplayProvider(std::move(replies));
}

std::string ReplayProvider::complete(const ChatRequest &request) {
  const auto key = sha256_hex(request.prompt_text());
  const auto it = replies_.find(key);
  if (it == replies_.end())
    throw ProviderError("replay fixture has no reply for prompt " + key,
                        /*retryable=*/false);
  return it->second;
}

} // namespace fuzzymatch::llm
