#include "fuzzymatch/confidence.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <string>

#include "fuzzymatch/errors.hpp"

namespace fuzzymatch::llm {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

// Length of the decimal literal starting at s[0]: -?(d+(.d*)?|.d+); 0 if none.
std::size_t scan_decimal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-')
    ++i;
  const std::size_t int_start = i;
  while (i < s.size() && is_digit(s[i]))
    ++i;
  const bool has_int = i > int_start;
  if (i < s.size() && s[i] == '.') {
    std::size_t j = i + 1;
    while (j < s.size() && is_digit(s[j]))
      ++j;
    const bool has_frac = j > i + 1;
    if (has_int || has_frac)
      return j;
  }
  return has_int ? i : 0;
}

double to_double(std::string_view token) {
  double v = 0.0;
  const auto *begin = token.data();
  const auto *end = token.data() + token.size();
  // from_chars rejects a leading '.', so prefix a zero when needed.
  std::string buf;
  if (token.front() == '.' || (token.front() == '-' && token.size() > 1 && token[1] == '.')) {
    buf = std::string(token);
    buf.insert(token.front() == '-' ? 1 : 0, "0");
    begin = buf.data();
    end = buf.data() + buf.size();
  }
  std::from_chars(begin, end, v);
  return v;
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

} // namespace

Confidence parse_confidence(std::string_view raw_reply) {
  const std::string_view trimmed = trim(raw_reply);
  if (!trimmed.empty() && scan_decimal(trimmed) == trimmed.size()) {
    const double v = to_double(trimmed);
    if (in_unit_interval(v))
      return {v == 0.0 ? 0.0 : v, false};
  }

  bool saw_token = false;
  std::size_t i = 0;
  while (i < raw_reply.size()) {
    const char c = raw_reply[i];
    const bool can_start =
        is_digit(c) || c == '.' || (c == '-' && i + 1 < raw_reply.size());
    // A token cannot start in the middle of a number or a word.
    const bool boundary =
        i == 0 || !(std::isalnum(static_cast<unsigned char>(raw_reply[i - 1])) ||
                    raw_reply[i - 1] == '.');
    if (can_start && boundary) {
      const std::size_t len = scan_decimal(raw_reply.substr(i));
      if (len > 0) {
        saw_token = true;
        const double v = to_double(raw_reply.substr(i, len));
        if (in_unit_interval(v))
          return {v == 0.0 ? 0.0 : v, true};
        i += len;
        continue;
      }
    }
    ++i;
  }
  if (saw_token)
    throw OutOfRangeReply("reply has no confidence in [0,1]: \"" +
                              std::string(raw_reply) + "\"",
                          std::string(raw_reply));
  throw UnparsableReply("reply contains no decimal number: \"" +
                            std::string(raw_reply) + "\"",
                        std::string(raw_reply));
}

} // namespace fuzzymatch::llm
