#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "detox/error.hpp"
#include "detox/lexicon.hpp"

namespace detox {

/// Sentinel substituted for a masked token before querying a masked LM.
inline constexpr std::string_view kMaskToken = "[MASK]";

struct MaskCandidate {
  std::string token;
  double score = 0.0;
};

/// Masked language model contract. `masked_text` contains exactly one mask
/// sentinel; `mask_position` is its token index within that text. Returned
/// candidates must be single whitespace-free tokens with non-increasing
/// scores; violations abort the calling operation with BackendError.
class MaskedLMBackend {
 public:
  virtual ~MaskedLMBackend() = default;
  virtual std::string id() const = 0;
  virtual std::vector<MaskCandidate> fill(const std::string& masked_text,
                                          std::size_t mask_position) = 0;
};

/// Replays canned candidate lists keyed by the exact masked text. Unknown
/// masked texts raise BackendError, which keeps test traces honest.
class ScriptedMaskedLM : public MaskedLMBackend {
 public:
  explicit ScriptedMaskedLM(std::map<std::string, std::vector<MaskCandidate>> responses);

  /// TSV, one line per masked text: masked_text \t token:score,token:score
  static ScriptedMaskedLM from_file(const std::filesystem::path& path);

  std::string id() const override { return "scripted-mlm"; }
  std::vector<MaskCandidate> fill(const std::string& masked_text,
                                  std::size_t mask_position) override;

 private:
  std::map<std::string, std::vector<MaskCandidate>> responses_;
};

/// Returns the same candidate list for every mask.
class FixedMaskedLM : public MaskedLMBackend {
 public:
  explicit FixedMaskedLM(std::vector<MaskCandidate> candidates);

  std::string id() const override { return "fixed-mlm"; }
  std::vector<MaskCandidate> fill(const std::string& masked_text,
                                  std::size_t mask_position) override;

 private:
  std::vector<MaskCandidate> candidates_;
};

/// Confidence in [0,1] that a single token is toxic.
using ToxicityFn = std::function<double(const std::string&)>;

/// Membership oracle: 1.0 for lexicon matches, 0.0 otherwise.
ToxicityFn make_lexicon_toxicity(const ToxicLexicon& lexicon);

struct DetoxResult {
  std::string output;
  bool modified = false;
  std::size_t spans_handled = 0;
  std::size_t fallback_deletions = 0;
};

/// Removes every lexicon-matched token. Survivors keep their order and
/// punctuation and are joined with single spaces; deleting a token drops its
/// punctuation with it. Idempotent.
DetoxResult delete_detox(std::string_view text, const ToxicLexicon& lexicon);

struct CondBertOptions {
  std::size_t max_candidates = 10;
  double toxicity_threshold = 0.5;
};

/// Masks lexicon-matched tokens left to right and substitutes the best
/// masked-LM candidate that is neither a lexicon member nor scored strictly
/// above the toxicity threshold. The replacement adopts the original token's
/// casing shape (all-lower, Capitalized, ALL-CAPS); earlier replacements are
/// visible to later fills. A mask with no surviving candidate falls back to
/// deletion. Any backend contract violation aborts the whole call.
DetoxResult condbert_detox(std::string_view text, const ToxicLexicon& lexicon,
                           MaskedLMBackend& mlm, const ToxicityFn& toxicity,
                           const CondBertOptions& options = {});

}  // namespace detox
