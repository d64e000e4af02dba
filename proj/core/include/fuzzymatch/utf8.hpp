#pragma once

#include <string>
#include <string_view>

namespace fuzzymatch::utf8 {

// Decodes UTF-8 into Unicode scalar values. Ill-formed sequences (overlong
// forms, surrogates, truncated input) decode to U+FFFD, one per maximal
// invalid subpart.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);

bool is_whitespace(char32_t c);

// Simple one-to-one case folding covering ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic. Characters outside those blocks map to themselves.
char32_t fold_case(char32_t c);

} // namespace fuzzymatch::utf8
