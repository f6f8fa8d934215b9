#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small UTF-8 utilities shared by the lexicon, baselines and harness modules.
// Case mapping covers ASCII and the Cyrillic block, which is all the corpora
// this toolkit targets need; other scripts pass through unchanged.

namespace detox {

/// Decodes the UTF-8 sequence starting at text[pos]. Invalid bytes are
/// consumed one at a time and returned as their raw byte value.
struct DecodedChar {
  char32_t codepoint;
  std::size_t length;
};
DecodedChar decode_utf8_at(std::string_view text, std::size_t pos);

std::vector<char32_t> decode_utf8(std::string_view text);
void encode_utf8(char32_t cp, std::string& out);
std::string encode_utf8(const std::vector<char32_t>& cps);

char32_t to_lower_cp(char32_t cp);
char32_t to_upper_cp(char32_t cp);
bool is_upper_cp(char32_t cp);
bool is_lower_cp(char32_t cp);
/// True for characters that participate in case mapping (ASCII + Cyrillic).
bool is_cased_cp(char32_t cp);

/// Lowercases ASCII and Cyrillic letters; leaves everything else alone.
std::string to_lower(std::string_view text);
std::string to_upper(std::string_view text);

bool is_ascii_space(char c);
bool is_ascii_punct(char c);

/// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

/// Collapses every whitespace run to a single space and trims the ends.
std::string normalize_whitespace(std::string_view text);

/// Lowercased, whitespace-normalized form used for copy detection.
std::string normalize_for_copy(std::string_view text);

/// Levenshtein distance over codepoints.
std::size_t edit_distance(std::string_view a, std::string_view b);
std::size_t edit_distance(const std::vector<char32_t>& a, const std::vector<char32_t>& b);

inline double clamp01(double x) {
  if (!(x > 0.0)) return 0.0;  // also maps NaN to 0
  return x < 1.0 ? x : 1.0;
}

}  // namespace detox
