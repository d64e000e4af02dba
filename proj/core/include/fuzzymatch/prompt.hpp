#pragma once

#include <string>
#include <string_view>

#include "fuzzymatch/types.hpp"

namespace fuzzymatch::llm {

enum class PromptKind { Plain, Enriched, Custom };

inline constexpr std::string_view kEntityA = "{entity_a}";
inline constexpr std::string_view kEntityB = "{entity_b}";

// Zero-shot prompt with `{entity_a}` / `{entity_b}` placeholders, each present
// exactly once.
class PromptTemplate {
public:
  static PromptTemplate plain();
  // Plain prompt preceded by a paragraph describing Congressional candidates
  // and the (R)/(D) party suffixes.
  static PromptTemplate enriched();
  // Throws TemplateError when a placeholder is missing or repeated.
  static PromptTemplate custom(std::string text);

  PromptKind kind() const { return kind_; }
  const std::string &text() const { return text_; }

  // Leading paragraph sent as the system message. Empty unless Enriched.
  std::string_view system_text() const;

private:
  PromptTemplate(PromptKind kind, std::string text)
      : kind_(kind), text_(std::move(text)) {}

  PromptKind kind_;
  std::string text_;
};

std::string_view prompt_kind_name(PromptKind kind);

// Chat messages for one pair. full() is the exact rendered template text.
struct RenderedPrompt {
  std::string system;
  std::string user;

  std::string full() const;
};

// Substitutes both placeholders with the raw entity strings in a single pass,
// so entity text that itself looks like a placeholder is left alone.
std::string render_prompt(const PromptTemplate &tmpl, const PairRecord &pair);

RenderedPrompt render_messages(const PromptTemplate &tmpl,
                               const PairRecord &pair);

} // namespace fuzzymatch::llm
