#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "detox/rng.hpp"
#include "detox/text.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace detox;

namespace {

const std::vector<char32_t> kPool = {
    U'a', U'B', U'z', U'0', U'.', U'!', U' ', U' ', U'(', U')',
    0x0436,  // Cyrillic zhe
    0x0416,  // Cyrillic ZHE
    0x0451,  // Cyrillic io
    0x0401,  // Cyrillic IO
    0x20AC,  // euro sign
    0x1F600  // emoji
};

std::vector<char32_t> random_codepoints(Rng& rng, std::size_t max_len) {
  std::vector<char32_t> cps(bounded_random(rng, max_len + 1));
  for (auto& cp : cps) cp = kPool[bounded_random(rng, kPool.size())];
  return cps;
}

}  // namespace

TEST_CASE("utf8 decode handles ascii, multibyte and invalid input") {
  CHECK(decode_utf8_at("a", 0).codepoint == U'a');
  CHECK(decode_utf8_at("a", 0).length == 1);

  const std::string zhe = "\xD0\xB6";
  CHECK(decode_utf8_at(zhe, 0).codepoint == 0x0436);
  CHECK(decode_utf8_at(zhe, 0).length == 2);

  const std::string emoji = "\xF0\x9F\x98\x80";
  CHECK(decode_utf8_at(emoji, 0).codepoint == 0x1F600);
  CHECK(decode_utf8_at(emoji, 0).length == 4);

  // A stray lead byte or bare continuation byte decodes as itself.
  CHECK(decode_utf8_at("\xD0", 0).codepoint == 0xD0);
  CHECK(decode_utf8_at("\xD0", 0).length == 1);
  CHECK(decode_utf8_at("\xBF", 0).codepoint == 0xBF);
  CHECK(decode_utf8(std::string("a\xFF""b")).size() == 3);
}

TEST_CASE("utf8 encode and decode round trip") {
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    const auto cps = random_codepoints(rng, 40);
    const std::string encoded = encode_utf8(cps);
    CHECK(decode_utf8(encoded) == cps);
  }
}

TEST_CASE("case mapping covers ascii and cyrillic including io") {
  CHECK(to_lower_cp(U'A') == U'a');
  CHECK(to_upper_cp(U'z') == U'Z');
  CHECK(to_lower_cp(0x0416) == 0x0436);  // ZHE -> zhe
  CHECK(to_upper_cp(0x0436) == 0x0416);
  CHECK(to_lower_cp(0x0401) == 0x0451);  // IO -> io
  CHECK(to_upper_cp(0x0451) == 0x0401);
  CHECK(to_lower_cp(0x20AC) == 0x20AC);  // uncased passes through
  CHECK(to_lower("Привет, World! Ёж") == "привет, world! ёж");
  CHECK(to_upper("привет, world! ёж") == "ПРИВЕТ, WORLD! ЁЖ");

  CHECK(is_upper_cp(U'Q'));
  CHECK(is_lower_cp(0x0451));
  CHECK(!is_cased_cp(U'7'));
  CHECK(!is_cased_cp(0x20AC));

  Rng rng(102);
  for (int i = 0; i < 200; ++i) {
    const char32_t cp = kPool[bounded_random(rng, kPool.size())];
    // Lowering is idempotent and inverts uppering on cased codepoints.
    CHECK(to_lower_cp(to_lower_cp(cp)) == to_lower_cp(cp));
    if (is_cased_cp(cp)) CHECK(to_lower_cp(to_upper_cp(cp)) == to_lower_cp(cp));
  }
}

TEST_CASE("whitespace helpers trim and collapse") {
  CHECK(trim("  hello  ") == "hello");
  CHECK(trim("\t a b \r\n") == "a b");
  CHECK(trim("") == "");
  CHECK(trim("   ") == "");
  CHECK(normalize_whitespace("  a   b \t c ") == "a b c");
  CHECK(normalize_whitespace("") == "");
  CHECK(normalize_for_copy("  Hello   WORLD ") == "hello world");
  CHECK(normalize_for_copy("ПрИвЕт\tмир") == "привет мир");
}

TEST_CASE("ascii classifiers reject multibyte characters") {
  CHECK(is_ascii_space(' '));
  CHECK(is_ascii_space('\t'));
  CHECK(!is_ascii_space('a'));
  CHECK(is_ascii_punct('!'));
  CHECK(is_ascii_punct('.'));
  CHECK(!is_ascii_punct('a'));
  CHECK(!is_ascii_punct('5'));
}

TEST_CASE("edit distance matches known values") {
  CHECK(edit_distance("", "") == 0);
  CHECK(edit_distance("abc", "") == 3);
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("flaw", "lawn") == 2);
  // Measured in codepoints, not bytes.
  CHECK(edit_distance("привет", "привез") == 1);
  CHECK(edit_distance("ёж", "еж") == 1);
}

TEST_CASE("edit distance satisfies metric properties") {
  Rng rng(103);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_codepoints(rng, 15);
    const auto b = random_codepoints(rng, 15);
    const std::string sa = encode_utf8(a);
    const std::string sb = encode_utf8(b);
    CHECK(edit_distance(sa, sa) == 0);
    CHECK(edit_distance(sa, sb) == edit_distance(sb, sa));
    const std::size_t d = edit_distance(sa, sb);
    const std::size_t longer = std::max(a.size(), b.size());
    const std::size_t shorter = std::min(a.size(), b.size());
    CHECK(d <= longer);
    CHECK(d >= longer - shorter);
  }
}

TEST_CASE("clamp01 clamps and absorbs nan") {
  CHECK(clamp01(0.5) == 0.5);
  CHECK(clamp01(-0.2) == 0.0);
  CHECK(clamp01(1.3) == 1.0);
  CHECK(clamp01(0.0) == 0.0);
  CHECK(clamp01(1.0) == 1.0);
  CHECK(clamp01(std::numeric_limits<double>::quiet_NaN()) == 0.0);
  CHECK(clamp01(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK(clamp01(-std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("deterministic shuffle and sampling are reproducible") {
  std::vector<int> a{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> b = a;
  Rng r1(7), r2(7);
  deterministic_shuffle(a, r1);
  deterministic_shuffle(b, r2);
  CHECK(a == b);

  Rng r3(9), r4(9);
  const auto s1 = sample_indices(100, 10, r3);
  const auto s2 = sample_indices(100, 10, r4);
  CHECK(s1 == s2);
  CHECK(s1.size() == 10);
  CHECK(std::is_sorted(s1.begin(), s1.end()));
  for (std::size_t i = 1; i < s1.size(); ++i) CHECK(s1[i] != s1[i - 1]);
  for (const auto idx : s1) CHECK(idx < 100);
}
