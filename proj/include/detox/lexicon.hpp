#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "detox/corpus.hpp"
#include "detox/error.hpp"

namespace detox {

/// A whitespace-delimited token split into its ASCII punctuation shell and
/// core, with byte offsets into the original text. The original chunk is
/// leading + core + trailing and occupies [begin, end).
struct Token {
  std::string leading;
  std::string core;
  std::string trailing;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Splits `text` on ASCII whitespace and peels surrounding ASCII punctuation
/// off each chunk. Multi-byte UTF-8 sequences are never treated as
/// punctuation, so Cyrillic text passes through intact.
std::vector<Token> tokenize(std::string_view text);

/// leading + core + trailing.
std::string token_text(const Token& token);

/// Rebuilds the original text from tokens plus the inter-token gaps; the
/// round trip is exact for unmodified token lists.
std::string reconstruct(std::string_view original, const std::vector<Token>& tokens);

struct TokenSpan {
  std::size_t start_token = 0;
  std::size_t end_token = 0;  // exclusive
  std::string surface;        // matched token core as it appears in the text
};

/// Per-language vocabulary of toxic terms. Entries are lowercase with
/// surrounding punctuation stripped; `*` inside an entry matches exactly one
/// non-space character.
class ToxicLexicon {
 public:
  ToxicLexicon(LanguageTag language, const std::vector<std::string>& raw_entries);

  const LanguageTag& language() const { return language_; }
  const std::set<std::string>& entries() const { return entries_; }

  /// Case-insensitive, wildcard-aware match of one token core.
  bool matches_token(std::string_view core) const;

 private:
  LanguageTag language_;
  std::set<std::string> entries_;
  std::set<std::string> exact_;
  std::vector<std::vector<char32_t>> wildcards_;
};

/// Loads one entry per line; blank lines and lines starting with `#` are
/// skipped. Entries must not contain internal whitespace.
ToxicLexicon load_lexicon(const std::filesystem::path& path, const LanguageTag& language);

/// Single-token spans over `text` whose cores match the lexicon; sorted and
/// non-overlapping by construction.
std::vector<TokenSpan> match_spans(std::string_view text, const ToxicLexicon& lexicon);
std::vector<TokenSpan> match_spans(const std::vector<Token>& tokens, const ToxicLexicon& lexicon);

}  // namespace detox
