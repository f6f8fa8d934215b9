#include "detox/lexicon.hpp"

#include <fstream>

#include "detox/text.hpp"

namespace detox {

namespace {

struct PunctSplit {
  std::string_view leading;
  std::string_view core;
  std::string_view trailing;
};

// Peels ASCII punctuation off both ends of a whitespace-free chunk. Internal
// punctuation (the censor `*` in "sh*t", the hyphen in "из-за") stays put.
PunctSplit split_punct(std::string_view chunk) {
  std::size_t core_begin = 0;
  while (core_begin < chunk.size() && is_ascii_punct(chunk[core_begin])) ++core_begin;
  std::size_t core_end = chunk.size();
  while (core_end > core_begin && is_ascii_punct(chunk[core_end - 1])) --core_end;
  return {chunk.substr(0, core_begin), chunk.substr(core_begin, core_end - core_begin),
          chunk.substr(core_end)};
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_ascii_space(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_ascii_space(text[end])) ++end;

    const PunctSplit parts = split_punct(text.substr(pos, end - pos));
    Token token;
    token.leading = std::string(parts.leading);
    token.core = std::string(parts.core);
    token.trailing = std::string(parts.trailing);
    token.begin = pos;
    token.end = end;
    tokens.push_back(std::move(token));
    pos = end;
  }
  return tokens;
}

std::string token_text(const Token& token) { return token.leading + token.core + token.trailing; }

std::string reconstruct(std::string_view original, const std::vector<Token>& tokens) {
  std::string out;
  std::size_t pos = 0;
  for (const Token& token : tokens) {
    out += original.substr(pos, token.begin - pos);
    out += token_text(token);
    pos = token.end;
  }
  out += original.substr(pos);
  return out;
}

ToxicLexicon::ToxicLexicon(LanguageTag language, const std::vector<std::string>& raw_entries)
    : language_(std::move(language)) {
  std::size_t line = 0;
  for (const std::string& raw : raw_entries) {
    ++line;
    const std::string_view trimmed = trim(raw);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    for (char c : trimmed) {
      if (is_ascii_space(c)) {
        throw LexiconError("line " + std::to_string(line) + ": entry '" + std::string(trimmed) +
                           "' contains whitespace");
      }
    }
    const std::string normalized = to_lower(split_punct(trimmed).core);
    if (normalized.empty()) {
      throw LexiconError("line " + std::to_string(line) + ": entry '" + std::string(trimmed) +
                         "' is empty after normalization");
    }
    if (!entries_.insert(normalized).second) continue;
    if (normalized.find('*') != std::string::npos) {
      wildcards_.push_back(decode_utf8(normalized));
    } else {
      exact_.insert(normalized);
    }
  }
}

bool ToxicLexicon::matches_token(std::string_view core) const {
  if (core.empty()) return false;
  const std::string normalized = to_lower(core);
  if (exact_.count(normalized)) return true;
  if (wildcards_.empty()) return false;

  const std::vector<char32_t> cps = decode_utf8(normalized);
  for (const std::vector<char32_t>& pattern : wildcards_) {
    if (pattern.size() != cps.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (pattern[i] == U'*') {
        if (cps[i] == U' ') {
          ok = false;
          break;
        }
      } else if (pattern[i] != cps[i]) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

ToxicLexicon load_lexicon(const std::filesystem::path& path, const LanguageTag& language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LexiconError("cannot open lexicon file: " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return ToxicLexicon(language, lines);
}

std::vector<TokenSpan> match_spans(const std::vector<Token>& tokens, const ToxicLexicon& lexicon) {
  std::vector<TokenSpan> spans;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (lexicon.matches_token(tokens[i].core)) {
      spans.push_back({i, i + 1, tokens[i].core});
    }
  }
  return spans;
}

std::vector<TokenSpan> match_spans(std::string_view text, const ToxicLexicon& lexicon) {
  return match_spans(tokenize(text), lexicon);
}

}  // namespace detox
