#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fuzzymatch/provider.hpp"

namespace fuzzymatch::cli {

enum ExitStatus : int {
  kExitOk = 0,
  kExitFatal = 1,   // configuration or fatal error
  kExitPartial = 2, // some pairs failed to score
};

// Process environment and provider seams, injectable for tests.
struct CliContext {
  std::ostream *out = nullptr;
  std::ostream *err = nullptr;
  std::function<std::optional<std::string>(const std::string &)> getenv;
  // Used for --mock instead of the built-in hashing mock when set.
  llm::ChatProvider *mock_provider = nullptr;
  // Builds the live provider; defaults to OpenAiChatProvider.
  std::function<std::unique_ptr<llm::ChatProvider>(const llm::OpenAiOptions &)>
      live_factory;

  // stdout/stderr and the real environment.
  static CliContext process();
};

// argv[0] is the program name.
int run(const std::vector<std::string> &args, CliContext &ctx);

} // namespace fuzzymatch::cli
