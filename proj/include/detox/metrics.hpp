#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "detox/corpus.hpp"
#include "detox/error.hpp"
#include "detox/lexicon.hpp"

namespace detox {

/// Per-sentence metric triple plus their product. All components live in
/// [0,1]; joint = sta * sim * fl by construction.
struct SentenceScores {
  double sta = 0.0;
  double sim = 0.0;
  double fl = 0.0;
  double joint = 0.0;

  /// Clamps each component to [0,1] and derives the product.
  static SentenceScores from_components(double sta, double sim, double fl);
};

struct SuiteInfo {
  LanguageTag language;
  std::string toxicity_model;
  std::string similarity_model;
  std::string fluency_model;
};

/// Bundle of the three scorer backends for one language. toxicity and
/// corruption are confidences in [0,1]; similarity is raw and may leave
/// [0,1] before the metric layer clamps it. Implementations must be pure
/// functions of their inputs for a fixed backend version.
class ScorerSuite {
 public:
  virtual ~ScorerSuite() = default;
  virtual SuiteInfo info() const = 0;
  virtual double toxicity(const std::string& text) = 0;
  virtual double similarity(const std::string& source, const std::string& generated) = 0;
  virtual double fluency_acceptability(const std::string& text) = 0;
  virtual double corruption(const std::string& text) = 0;
};

/// English style accuracy: 0 when toxicity is strictly above the threshold,
/// 1 otherwise.
double score_sta_english(const std::string& generated, ScorerSuite& suite, double threshold = 0.8);

/// Russian style accuracy: continuous 1 - toxicity.
double score_sta_russian(const std::string& generated, ScorerSuite& suite);

/// Content preservation: raw similarity clamped to [0,1].
double score_sim(const std::string& source, const std::string& generated, ScorerSuite& suite);

/// English fluency: 1 when acceptability reaches the threshold, else 0.
double score_fl_english(const std::string& generated, ScorerSuite& suite, double threshold = 0.5);

/// Russian fluency: clamp01(1 - max(0, corruption(gen) - corruption(src))).
/// Exactly 1 whenever the output is no more corrupted than the input.
double score_fl_russian(const std::string& source, const std::string& generated,
                        ScorerSuite& suite);

/// Mean over sentences of the per-sentence sta*sim*fl product. Throws
/// UsageError on an empty list.
double compute_joint(const std::vector<SentenceScores>& scores);

struct AggregateScores {
  double sta = 0.0;
  double sim = 0.0;
  double fl = 0.0;
  double joint = 0.0;
};

/// Column means plus the joint metric. Note joint is the mean of products,
/// not the product of the column means; the two differ whenever scores vary
/// across sentences.
AggregateScores aggregate(const std::vector<SentenceScores>& scores);

/// Deterministic lexicon-driven suite for tests and offline runs:
/// toxicity = matched tokens / total tokens (0 for empty text), similarity =
/// token-set Jaccard over lowercased cores, fluency = 1.0 for non-empty text
/// with balanced ()[]{} and an even count of '"', else 0.3, corruption =
/// 1 - fluency.
class ReferenceScorerSuite : public ScorerSuite {
 public:
  explicit ReferenceScorerSuite(ToxicLexicon lexicon);

  SuiteInfo info() const override;
  double toxicity(const std::string& text) override;
  double similarity(const std::string& source, const std::string& generated) override;
  double fluency_acceptability(const std::string& text) override;
  double corruption(const std::string& text) override;

 private:
  ToxicLexicon lexicon_;
};

std::unique_ptr<ScorerSuite> reference_scorer_suite(ToxicLexicon lexicon);

/// Replays scorer outputs captured from real checkpoints. The JSON file maps
/// texts (and source/generated pairs) to raw scores; any lookup miss raises
/// ScorerError so silent fallbacks cannot skew a report.
class PrecomputedScorerSuite : public ScorerSuite {
 public:
  static PrecomputedScorerSuite from_file(const std::filesystem::path& path);

  SuiteInfo info() const override { return info_; }
  double toxicity(const std::string& text) override;
  double similarity(const std::string& source, const std::string& generated) override;
  double fluency_acceptability(const std::string& text) override;
  double corruption(const std::string& text) override;

 private:
  PrecomputedScorerSuite() = default;

  SuiteInfo info_;
  std::map<std::string, double> toxicity_;
  std::map<std::pair<std::string, std::string>, double> similarity_;
  std::map<std::string, double> fluency_;
  std::map<std::string, double> corruption_;
};

}  // namespace detox
