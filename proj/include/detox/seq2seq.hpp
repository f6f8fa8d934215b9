#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "detox/corpus.hpp"
#include "detox/error.hpp"
#include "detox/lexicon.hpp"
#include "detox/run.hpp"

namespace detox {

/// Fine-tuning hyperparameters shared by every sequence-to-sequence backend.
struct TrainingConfig {
  double learning_rate = 1e-4;
  std::string schedule = "linear-decay";
  std::size_t warmup_steps = 500;
  std::size_t batch_size = 8;
  std::size_t max_iterations = 40000;
  std::uint64_t seed = 0;
  std::size_t checkpoint_every = 1000;

  /// Throws ConfigError on violated invariants.
  void validate() const;

  static TrainingConfig mt5_defaults();
  /// iterations must be one of 1000, 3000, 5000, 10000.
  static TrainingConfig mbart_defaults(std::size_t iterations);

  nlohmann::ordered_json to_json() const;
};

/// Opaque result of fine-tuning; backends stash whatever they need to
/// generate later. Shared so handles can be cached and reused across runs.
struct TrainedModel {
  std::string backend_id;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

using ModelHandle = std::shared_ptr<const TrainedModel>;

/// Sequence-to-sequence detoxifier contract. generate must return exactly one
/// output per input, in order, deterministically for a fixed handle.
class DetoxModelBackend {
 public:
  virtual ~DetoxModelBackend() = default;
  virtual std::string id() const = 0;
  virtual ModelHandle fine_tune(const std::vector<FlatPair>& pairs,
                                const TrainingConfig& config) = 0;
  virtual std::vector<std::string> generate(const ModelHandle& handle,
                                            const std::vector<std::string>& texts,
                                            const LanguageTag& language) = 0;
};

/// Echoes its input unchanged; the floor every trained system must beat.
class CopyBackend : public DetoxModelBackend {
 public:
  std::string id() const override { return "copy"; }
  ModelHandle fine_tune(const std::vector<FlatPair>& pairs,
                        const TrainingConfig& config) override;
  std::vector<std::string> generate(const ModelHandle& handle,
                                    const std::vector<std::string>& texts,
                                    const LanguageTag& language) override;
};

/// Applies lexicon deletion regardless of the requested language; with a
/// lexicon from another language this mechanically reproduces the do-nothing
/// failure mode of cross-lingual transfer.
class LexiconDeleteBackend : public DetoxModelBackend {
 public:
  explicit LexiconDeleteBackend(std::optional<ToxicLexicon> lexicon);

  std::string id() const override { return "lexicon-delete"; }
  ModelHandle fine_tune(const std::vector<FlatPair>& pairs,
                        const TrainingConfig& config) override;
  std::vector<std::string> generate(const ModelHandle& handle,
                                    const std::vector<std::string>& texts,
                                    const LanguageTag& language) override;

 private:
  std::optional<ToxicLexicon> lexicon_;
};

/// name is "copy" or "lexicon-delete"; anything else is a usage error.
std::unique_ptr<DetoxModelBackend> make_reference_backend(const std::string& name,
                                                          std::optional<ToxicLexicon> lexicon);

enum class SetupKind { monolingual, multilingual, crosslingual };

std::string to_string(SetupKind kind);
SetupKind setup_kind_from_string(const std::string& name);

/// Which languages a model is trained on and evaluated against.
struct ExperimentSetup {
  SetupKind kind = SetupKind::monolingual;
  std::set<LanguageTag> train_languages;
  std::set<LanguageTag> eval_languages;
  /// Total record budget when two training corpora are pooled.
  std::size_t equalize_total = 10000;

  /// Throws UsageError when the language sets contradict the setup kind.
  void validate() const;
};

/// Per-language corpus splits available to an experiment.
struct CorpusSet {
  std::optional<Corpus> train;
  std::optional<Corpus> dev;
  std::optional<Corpus> test;
};

using CorpusMap = std::map<LanguageTag, CorpusSet>;

struct TrainingSet {
  std::vector<FlatPair> pairs;
  /// Record counts per language before multi-reference flattening.
  std::map<std::string, std::size_t> records_per_language;
};

/// Collects training pairs for the setup: single-language setups flatten the
/// train split as-is; two-language setups equalize both corpora to
/// equalize_total and shuffle the flattened pairs with the given seed.
TrainingSet assemble_training_pairs(const ExperimentSetup& setup, const CorpusMap& corpora,
                                    std::uint64_t seed);

/// Fine-tunes the backend per the setup and generates over every eval
/// language's test split. Returns one run per eval language.
std::map<LanguageTag, SystemRun> run_experiment(const ExperimentSetup& setup,
                                                const CorpusMap& corpora,
                                                DetoxModelBackend& backend,
                                                const TrainingConfig& config);

}  // namespace detox
