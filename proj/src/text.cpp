#include "detox/text.hpp"

#include <algorithm>

namespace detox {

DecodedChar decode_utf8_at(std::string_view text, std::size_t pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char b0 = byte(pos);
  const std::size_t remaining = text.size() - pos;

  auto continuation = [&](std::size_t i) {
    return i < text.size() && (byte(i) & 0xC0u) == 0x80u;
  };

  if (b0 < 0x80u) return {b0, 1};
  if ((b0 & 0xE0u) == 0xC0u && remaining >= 2 && continuation(pos + 1)) {
    char32_t cp = (char32_t(b0 & 0x1Fu) << 6) | (byte(pos + 1) & 0x3Fu);
    if (cp >= 0x80) return {cp, 2};
  } else if ((b0 & 0xF0u) == 0xE0u && remaining >= 3 && continuation(pos + 1) && continuation(pos + 2)) {
    char32_t cp = (char32_t(b0 & 0x0Fu) << 12) | (char32_t(byte(pos + 1) & 0x3Fu) << 6) |
                  (byte(pos + 2) & 0x3Fu);
    if (cp >= 0x800) return {cp, 3};
  } else if ((b0 & 0xF8u) == 0xF0u && remaining >= 4 && continuation(pos + 1) && continuation(pos + 2) &&
             continuation(pos + 3)) {
    char32_t cp = (char32_t(b0 & 0x07u) << 18) | (char32_t(byte(pos + 1) & 0x3Fu) << 12) |
                  (char32_t(byte(pos + 2) & 0x3Fu) << 6) | (byte(pos + 3) & 0x3Fu);
    if (cp >= 0x10000 && cp <= 0x10FFFF) return {cp, 4};
  }
  // Invalid sequence: treat the byte as a standalone codepoint.
  return {b0, 1};
}

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> cps;
  cps.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    DecodedChar d = decode_utf8_at(text, pos);
    cps.push_back(d.codepoint);
    pos += d.length;
  }
  return cps;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) encode_utf8(cp, out);
  return out;
}

namespace {

// Cyrillic ranges: U+0410..U+042F upper, U+0430..U+044F lower,
// U+0400..U+040F upper (incl. Ё), U+0450..U+045F lower (incl. ё).
constexpr char32_t kCyrUpperA = 0x0410, kCyrUpperZ = 0x042F;
constexpr char32_t kCyrLowerA = 0x0430, kCyrLowerZ = 0x044F;
constexpr char32_t kCyrExtUpperA = 0x0400, kCyrExtUpperZ = 0x040F;
constexpr char32_t kCyrExtLowerA = 0x0450, kCyrExtLowerZ = 0x045F;

}  // namespace

char32_t to_lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= kCyrUpperA && cp <= kCyrUpperZ) return cp + 0x20;
  if (cp >= kCyrExtUpperA && cp <= kCyrExtUpperZ) return cp + 0x50;
  return cp;
}

char32_t to_upper_cp(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return cp - 0x20;
  if (cp >= kCyrLowerA && cp <= kCyrLowerZ) return cp - 0x20;
  if (cp >= kCyrExtLowerA && cp <= kCyrExtLowerZ) return cp - 0x50;
  return cp;
}

bool is_upper_cp(char32_t cp) {
  return (cp >= U'A' && cp <= U'Z') || (cp >= kCyrUpperA && cp <= kCyrUpperZ) ||
         (cp >= kCyrExtUpperA && cp <= kCyrExtUpperZ);
}

bool is_lower_cp(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= kCyrLowerA && cp <= kCyrLowerZ) ||
         (cp >= kCyrExtLowerA && cp <= kCyrExtLowerZ);
}

bool is_cased_cp(char32_t cp) { return is_upper_cp(cp) || is_lower_cp(cp); }

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    DecodedChar d = decode_utf8_at(text, pos);
    encode_utf8(to_lower_cp(d.codepoint), out);
    pos += d.length;
  }
  return out;
}

std::string to_upper(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    DecodedChar d = decode_utf8_at(text, pos);
    encode_utf8(to_upper_cp(d.codepoint), out);
    pos += d.length;
  }
  return out;
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  return (u >= 0x21 && u <= 0x2F) || (u >= 0x3A && u <= 0x40) || (u >= 0x5B && u <= 0x60) ||
         (u >= 0x7B && u <= 0x7E);
}

std::string_view trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_ascii_space(text[begin])) ++begin;
  while (end > begin && is_ascii_space(text[end - 1])) --end;
  return text.substr(begin, end - begin);
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : trim(text)) {
    if (is_ascii_space(c)) {
      in_space = true;
    } else {
      if (in_space && !out.empty()) out.push_back(' ');
      in_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string normalize_for_copy(std::string_view text) {
  return to_lower(normalize_whitespace(text));
}

std::size_t edit_distance(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;

  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> curr(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    curr[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
    }
    std::swap(prev, curr);
  }
  return prev[m];
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(decode_utf8(a), decode_utf8(b));
}

}  // namespace detox
