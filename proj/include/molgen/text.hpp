#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across modules.
namespace molgen::text {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string to_lower(std::string_view s);
bool starts_with_icase(std::string_view s, std::string_view prefix);

// Lowercased alphanumeric runs; everything else separates tokens. Bytes >= 0x80
// are kept inside words so UTF-8 sequences survive intact.
std::vector<std::string> word_tokens(std::string_view s);

// Lowercased word tokens plus each punctuation character as its own token.
// Used by the word-level text metrics.
std::vector<std::string> word_punct_tokens(std::string_view s);

// Decodes UTF-8 into Unicode scalar values. Invalid bytes map to U+FFFD.
std::u32string utf8_to_u32(std::string_view s);

}  // namespace molgen::text
