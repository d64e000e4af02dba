#include <gtest/gtest.h>

#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/prompt.hpp"
#include "test_support.hpp"

using namespace fuzzymatch::llm;
using fuzzymatch::PairRecord;

namespace {
std::string golden(const std::string &name) {
  return testsupport::read_text(std::string(FUZZYMATCH_TEST_DATA) + "/" + name);
}
} // namespace

TEST(Prompt, PlainMatchesGoldenFile) {
  const auto text = render_prompt(PromptTemplate::plain(), {"DPRK", "North Korea"});
  EXPECT_EQ(text, golden("plain_prompt.txt"));
  EXPECT_NE(text.find("the following entities, DPRK and North Korea, refer to the same "
                      "entity, allowing for the possibility of minor typos?"),
            std::string::npos);
}

TEST(Prompt, EnrichedMatchesGoldenFile) {
  const PairRecord p{"Walter B. Jones (R)", "Walter Jones (R)"};
  const auto text = render_prompt(PromptTemplate::enriched(), p);
  EXPECT_EQ(text, golden("enriched_prompt.txt"));
  EXPECT_EQ(text.rfind("You are a helpful and knowledgeable assistant.", 0), 0u);
  EXPECT_NE(text.find("Both entities refer to Congressional candidates, where 'R' stands "
                      "for Republican and 'D' stands for 'Democrat'."),
            std::string::npos);
}

TEST(Prompt, TemplatesContainRequiredSentences) {
  for (const auto &t : {PromptTemplate::plain(), PromptTemplate::enriched()}) {
    EXPECT_NE(t.text().find("How confident are you that the following entities"),
              std::string::npos);
    EXPECT_NE(t.text().find("Please return your confidence in the range of 0 and 1 "
                            "only and no other words."),
              std::string::npos);
  }
}

TEST(Prompt, MessagesSplit) {
  const PairRecord p{"a", "b"};
  const auto plain = render_messages(PromptTemplate::plain(), p);
  EXPECT_TRUE(plain.system.empty());
  EXPECT_EQ(plain.full(), render_prompt(PromptTemplate::plain(), p));

  const auto enriched = render_messages(PromptTemplate::enriched(), p);
  EXPECT_EQ(enriched.system.rfind("You are a helpful", 0), 0u);
  EXPECT_EQ(enriched.user, plain.user);
  EXPECT_EQ(enriched.full(), render_prompt(PromptTemplate::enriched(), p));
}

TEST(Prompt, CustomTemplate) {
  EXPECT_EQ(render_prompt(PromptTemplate::custom("{entity_a}|{entity_b}"), {"a", "b"}),
            "a|b");
}

TEST(Prompt, CustomTemplateRejectsBadPlaceholders) {
  EXPECT_THROW(PromptTemplate::custom("{entity_a} only"), fuzzymatch::TemplateError);
  EXPECT_THROW(PromptTemplate::custom("{entity_a} {entity_b} {entity_a}"),
               fuzzymatch::TemplateError);
  EXPECT_THROW(PromptTemplate::custom(""), fuzzymatch::TemplateError);
}

TEST(Prompt, EntitiesAreSubstitutedRawInOnePass) {
  const auto out = render_prompt(PromptTemplate::custom("<{entity_a}><{entity_b}>"),
                                 {"{entity_b}", "  X  "});
  EXPECT_EQ(out, "<{entity_b}><  X  >");
}
