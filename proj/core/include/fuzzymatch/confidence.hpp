#pragma once

#include <string_view>

namespace fuzzymatch::llm {

struct Confidence {
  double value = 0.0;
  bool lenient = false; // true when the fallback scan was needed
};

// Turns a model reply into a confidence in [0,1].
//
// Strict path: the trimmed reply is a single decimal literal in [0,1].
// Lenient path: the first decimal token anywhere in the reply that lies in
// [0,1]. Throws UnparsableReply when the reply has no decimal token at all and
// OutOfRangeReply when every decimal token is outside [0,1].
Confidence parse_confidence(std::string_view raw_reply);

} // namespace fuzzymatch::llm
