#include "fuzzymatch/prompt.hpp"

#include "fuzzymatch/errors.hpp"

namespace fuzzymatch::llm {

namespace {

constexpr std::string_view kPlainText =
    "How confident are you that the following entities, {entity_a} and "
    "{entity_b}, refer to the same entity, allowing for the possibility of "
    "minor typos?\n"
    "Please return your confidence in the range of 0 and 1 only and no other "
    "words.";

constexpr std::string_view kEnrichedPreamble =
    "You are a helpful and knowledgeable assistant. You will be given two "
    "entities. Both entities refer to Congressional candidates, where 'R' "
    "stands for Republican and 'D' stands for 'Democrat'.";

constexpr std::string_view kParagraphBreak = "\n\n";

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

} // namespace

PromptTemplate PromptTemplate::plain() {
  return PromptTemplate(PromptKind::Plain, std::string(kPlainText));
}

PromptTemplate PromptTemplate::enriched() {
  std::string text(kEnrichedPreamble);
  text += kParagraphBreak;
  text += kPlainText;
  return PromptTemplate(PromptKind::Enriched, std::move(text));
}

PromptTemplate PromptTemplate::custom(std::string text) {
  for (auto placeholder : {kEntityA, kEntityB}) {
    const auto n = count_occurrences(text, placeholder);
    if (n != 1)
      throw TemplateError("prompt template must contain " +
                          std::string(placeholder) + " exactly once (found " +
                          std::to_string(n) + ")");
  }
  return PromptTemplate(PromptKind::Custom, std::move(text));
}

std::string_view PromptTemplate::system_text() const {
  if (kind_ != PromptKind::Enriched)
    return {};
  return kEnrichedPreamble;
}

std::string_view prompt_kind_name(PromptKind kind) {
  switch (kind) {
  case PromptKind::Plain:
    return "plain";
  case PromptKind::Enriched:
    return "enriched";
  case PromptKind::Custom:
    return "custom";
  }
  return "unknown";
}

std::string RenderedPrompt::full() const {
  if (system.empty())
    return user;
  return system + std::string(kParagraphBreak) + user;
}

std::string render_prompt(const PromptTemplate &tmpl, const PairRecord &pair) {
  const std::string &text = tmpl.text();
  const auto pos_a = text.find(kEntityA);
  const auto pos_b = text.find(kEntityB);
  if (pos_a == std::string::npos || pos_b == std::string::npos)
    throw TemplateError("prompt template is missing a placeholder");

  const bool a_first = pos_a < pos_b;
  const auto first = a_first ? pos_a : pos_b;
  const auto second = a_first ? pos_b : pos_a;
  const auto &first_value = a_first ? pair.left : pair.right;
  const auto &second_value = a_first ? pair.right : pair.left;
  const auto first_len = (a_first ? kEntityA : kEntityB).size();
  const auto second_len = (a_first ? kEntityB : kEntityA).size();

  std::string out;
  out.reserve(text.size() + pair.left.size() + pair.right.size());
  out.append(text, 0, first);
  out += first_value;
  out.append(text, first + first_len, second - first - first_len);
  out += second_value;
  out.append(text, second + second_len);
  return out;
}

RenderedPrompt render_messages(const PromptTemplate &tmpl,
                               const PairRecord &pair) {
  std::string full = render_prompt(tmpl, pair);
  const auto system = tmpl.system_text();
  if (system.empty())
    return {{}, std::move(full)};
  return {std::string(system), full.substr(system.size() + kParagraphBreak.size())};
}

} // namespace fuzzymatch::llm
