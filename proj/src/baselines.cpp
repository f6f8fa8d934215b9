#include "detox/baselines.hpp"

#include <fstream>
#include <optional>
#include <utility>

#include "detox/text.hpp"

namespace detox {

namespace {

std::vector<MaskCandidate> parse_candidate_list(const std::string& field, std::size_t line) {
  std::vector<MaskCandidate> candidates;
  std::size_t pos = 0;
  while (pos <= field.size()) {
    std::size_t comma = field.find(',', pos);
    if (comma == std::string::npos) comma = field.size();
    const std::string item = field.substr(pos, comma - pos);
    const std::size_t colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw ConfigError("masked-LM script line " + std::to_string(line) +
                        ": expected token:score, got '" + item + "'");
    }
    MaskCandidate candidate;
    candidate.token = item.substr(0, colon);
    try {
      candidate.score = std::stod(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("masked-LM script line " + std::to_string(line) +
                        ": bad score in '" + item + "'");
    }
    candidates.push_back(std::move(candidate));
    pos = comma + 1;
  }
  return candidates;
}

enum class CaseShape { lower, capitalized, upper, other };

CaseShape case_shape(std::string_view core) {
  std::size_t cased = 0, upper = 0;
  bool first_is_upper_cased = false;
  bool rest_lower = true;
  bool seen_first = false;
  for (std::size_t pos = 0; pos < core.size();) {
    const DecodedChar dc = decode_utf8_at(core, pos);
    pos += dc.length;
    if (!is_cased_cp(dc.codepoint)) {
      if (!seen_first) seen_first = true;
      continue;
    }
    if (!seen_first) {
      seen_first = true;
      first_is_upper_cased = is_upper_cp(dc.codepoint);
    } else if (is_upper_cp(dc.codepoint)) {
      rest_lower = false;
    }
    ++cased;
    if (is_upper_cp(dc.codepoint)) ++upper;
  }
  if (cased == 0) return CaseShape::other;
  if (upper == 0) return CaseShape::lower;
  if (upper == cased && cased >= 2) return CaseShape::upper;
  if (first_is_upper_cased && rest_lower) return CaseShape::capitalized;
  return CaseShape::other;
}

std::string capitalize(std::string_view word) {
  if (word.empty()) return {};
  const DecodedChar first = decode_utf8_at(word, 0);
  std::string out;
  encode_utf8(to_upper_cp(first.codepoint), out);
  out += to_lower(word.substr(first.length));
  return out;
}

std::string adapt_casing(std::string_view candidate, std::string_view original_core) {
  switch (case_shape(original_core)) {
    case CaseShape::lower:
      return to_lower(candidate);
    case CaseShape::capitalized:
      return capitalize(candidate);
    case CaseShape::upper:
      return to_upper(candidate);
    case CaseShape::other:
      return std::string(candidate);
  }
  return std::string(candidate);
}

struct WorkingToken {
  Token token;
  bool deleted = false;
};

std::string join_tokens(const std::vector<WorkingToken>& tokens) {
  std::string out;
  for (const WorkingToken& wt : tokens) {
    if (wt.deleted) continue;
    if (!out.empty()) out += ' ';
    out += token_text(wt.token);
  }
  return out;
}

void validate_candidates(const std::vector<MaskCandidate>& candidates, const std::string& backend) {
  double previous = 0.0;
  bool first = true;
  for (const MaskCandidate& candidate : candidates) {
    if (candidate.token.empty()) {
      throw BackendError("masked-LM backend '" + backend + "' returned an empty candidate");
    }
    for (char c : candidate.token) {
      if (is_ascii_space(c)) {
        throw BackendError("masked-LM backend '" + backend + "' returned candidate '" +
                           candidate.token + "' containing whitespace");
      }
    }
    if (!first && candidate.score > previous) {
      throw BackendError("masked-LM backend '" + backend + "' returned increasing scores (" +
                         std::to_string(previous) + " then " + std::to_string(candidate.score) +
                         ")");
    }
    previous = candidate.score;
    first = false;
  }
}

}  // namespace

ScriptedMaskedLM::ScriptedMaskedLM(std::map<std::string, std::vector<MaskCandidate>> responses)
    : responses_(std::move(responses)) {}

ScriptedMaskedLM ScriptedMaskedLM::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open masked-LM script: " + path.string());
  }
  std::map<std::string, std::vector<MaskCandidate>> responses;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError("masked-LM script line " + std::to_string(line_number) +
                        ": expected masked_text<TAB>candidates");
    }
    responses[line.substr(0, tab)] = parse_candidate_list(line.substr(tab + 1), line_number);
  }
  return ScriptedMaskedLM(std::move(responses));
}

std::vector<MaskCandidate> ScriptedMaskedLM::fill(const std::string& masked_text,
                                                  std::size_t mask_position) {
  (void)mask_position;
  const auto it = responses_.find(masked_text);
  if (it == responses_.end()) {
    throw BackendError("no scripted masked-LM response for: " + masked_text);
  }
  return it->second;
}

FixedMaskedLM::FixedMaskedLM(std::vector<MaskCandidate> candidates)
    : candidates_(std::move(candidates)) {}

std::vector<MaskCandidate> FixedMaskedLM::fill(const std::string& masked_text,
                                               std::size_t mask_position) {
  (void)masked_text;
  (void)mask_position;
  return candidates_;
}

ToxicityFn make_lexicon_toxicity(const ToxicLexicon& lexicon) {
  return [&lexicon](const std::string& token) {
    return lexicon.matches_token(token) ? 1.0 : 0.0;
  };
}

DetoxResult delete_detox(std::string_view text, const ToxicLexicon& lexicon) {
  const std::vector<Token> tokens = tokenize(text);
  const std::vector<TokenSpan> spans = match_spans(tokens, lexicon);
  DetoxResult result;
  result.spans_handled = spans.size();
  if (spans.empty()) {
    result.output = std::string(text);
    return result;
  }
  std::vector<bool> deleted(tokens.size(), false);
  for (const TokenSpan& span : spans) {
    for (std::size_t i = span.start_token; i < span.end_token; ++i) deleted[i] = true;
  }
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (deleted[i]) continue;
    if (!out.empty()) out += ' ';
    out += token_text(tokens[i]);
  }
  result.output = std::move(out);
  result.modified = normalize_whitespace(text) != normalize_whitespace(result.output);
  return result;
}

DetoxResult condbert_detox(std::string_view text, const ToxicLexicon& lexicon,
                           MaskedLMBackend& mlm, const ToxicityFn& toxicity,
                           const CondBertOptions& options) {
  if (options.max_candidates < 1) {
    throw UsageError("condbert: max_candidates must be at least 1");
  }
  if (options.toxicity_threshold < 0.0 || options.toxicity_threshold > 1.0) {
    throw UsageError("condbert: toxicity_threshold must lie in [0,1]");
  }

  const std::vector<Token> tokens = tokenize(text);
  const std::vector<TokenSpan> spans = match_spans(tokens, lexicon);
  DetoxResult result;
  result.spans_handled = spans.size();
  if (spans.empty()) {
    result.output = std::string(text);
    return result;
  }

  std::vector<WorkingToken> working;
  working.reserve(tokens.size());
  for (const Token& token : tokens) working.push_back({token, false});

  for (const TokenSpan& span : spans) {
    const std::size_t target = span.start_token;
    // Build the masked sentence over the surviving tokens, substituting the
    // sentinel for the target core; earlier replacements are already in place.
    std::string masked;
    std::size_t mask_position = 0;
    std::size_t visible_index = 0;
    for (std::size_t i = 0; i < working.size(); ++i) {
      if (working[i].deleted) continue;
      if (!masked.empty()) masked += ' ';
      if (i == target) {
        mask_position = visible_index;
        masked += working[i].token.leading;
        masked += kMaskToken;
        masked += working[i].token.trailing;
      } else {
        masked += token_text(working[i].token);
      }
      ++visible_index;
    }

    std::vector<MaskCandidate> candidates = mlm.fill(masked, mask_position);
    validate_candidates(candidates, mlm.id());
    if (candidates.size() > options.max_candidates) {
      candidates.resize(options.max_candidates);
    }

    std::optional<std::string> replacement;
    for (const MaskCandidate& candidate : candidates) {
      if (lexicon.matches_token(candidate.token)) continue;
      if (toxicity(candidate.token) > options.toxicity_threshold) continue;
      replacement = adapt_casing(candidate.token, working[target].token.core);
      break;
    }

    if (replacement) {
      working[target].token.core = *replacement;
    } else {
      working[target].deleted = true;
      ++result.fallback_deletions;
    }
  }

  result.output = join_tokens(working);
  result.modified = normalize_whitespace(text) != normalize_whitespace(result.output);
  return result;
}

}  // namespace detox
