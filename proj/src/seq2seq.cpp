#include "detox/seq2seq.hpp"

#include <utility>

#include "detox/baselines.hpp"
#include "detox/harness.hpp"
#include "detox/rng.hpp"

namespace detox {

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (schedule != "linear-decay") {
    throw ConfigError("unsupported schedule '" + schedule + "' (only linear-decay)");
  }
  if (warmup_steps > 1000) {
    throw ConfigError("warmup_steps must lie in [0, 1000]");
  }
  if (batch_size == 0) {
    throw ConfigError("batch_size must be positive");
  }
  if (max_iterations == 0) {
    throw ConfigError("max_iterations must be positive");
  }
  if (warmup_steps > max_iterations) {
    throw ConfigError("warmup_steps must not exceed max_iterations");
  }
  if (checkpoint_every == 0) {
    throw ConfigError("checkpoint_every must be positive");
  }
}

TrainingConfig TrainingConfig::mt5_defaults() {
  TrainingConfig config;
  config.max_iterations = 40000;
  return config;
}

TrainingConfig TrainingConfig::mbart_defaults(std::size_t iterations) {
  if (iterations != 1000 && iterations != 3000 && iterations != 5000 && iterations != 10000) {
    throw ConfigError("mbart presets support 1000, 3000, 5000 or 10000 iterations");
  }
  TrainingConfig config;
  config.max_iterations = iterations;
  return config;
}

nlohmann::ordered_json TrainingConfig::to_json() const {
  return nlohmann::ordered_json{{"learning_rate", learning_rate},
                                {"schedule", schedule},
                                {"warmup_steps", warmup_steps},
                                {"batch_size", batch_size},
                                {"max_iterations", max_iterations},
                                {"seed", seed},
                                {"checkpoint_every", checkpoint_every}};
}

namespace {

void require_handle(const ModelHandle& handle, const std::string& backend_id) {
  if (!handle) {
    throw BackendError("backend '" + backend_id + "' received a null model handle");
  }
  if (handle->backend_id != backend_id) {
    throw BackendError("backend '" + backend_id + "' received a handle trained by '" +
                       handle->backend_id + "'");
  }
}

}  // namespace

ModelHandle CopyBackend::fine_tune(const std::vector<FlatPair>& pairs,
                                   const TrainingConfig& config) {
  config.validate();
  auto model = std::make_shared<TrainedModel>();
  model->backend_id = id();
  model->details["training_pairs"] = pairs.size();
  return model;
}

std::vector<std::string> CopyBackend::generate(const ModelHandle& handle,
                                               const std::vector<std::string>& texts,
                                               const LanguageTag& language) {
  (void)language;
  require_handle(handle, id());
  return texts;
}

LexiconDeleteBackend::LexiconDeleteBackend(std::optional<ToxicLexicon> lexicon)
    : lexicon_(std::move(lexicon)) {}

ModelHandle LexiconDeleteBackend::fine_tune(const std::vector<FlatPair>& pairs,
                                            const TrainingConfig& config) {
  config.validate();
  if (!lexicon_) {
    throw ConfigError("lexicon-delete backend requires a lexicon");
  }
  auto model = std::make_shared<TrainedModel>();
  model->backend_id = id();
  model->details["training_pairs"] = pairs.size();
  model->details["lexicon_language"] = lexicon_->language().code();
  model->details["lexicon_entries"] = lexicon_->entries().size();
  return model;
}

std::vector<std::string> LexiconDeleteBackend::generate(const ModelHandle& handle,
                                                        const std::vector<std::string>& texts,
                                                        const LanguageTag& language) {
  (void)language;
  require_handle(handle, id());
  if (!lexicon_) {
    throw ConfigError("lexicon-delete backend requires a lexicon");
  }
  std::vector<std::string> outputs;
  outputs.reserve(texts.size());
  for (const std::string& text : texts) {
    outputs.push_back(delete_detox(text, *lexicon_).output);
  }
  return outputs;
}

std::unique_ptr<DetoxModelBackend> make_reference_backend(const std::string& name,
                                                          std::optional<ToxicLexicon> lexicon) {
  if (name == "copy") return std::make_unique<CopyBackend>();
  if (name == "lexicon-delete") return std::make_unique<LexiconDeleteBackend>(std::move(lexicon));
  throw UsageError("unknown reference backend '" + name + "' (copy, lexicon-delete)");
}

std::string to_string(SetupKind kind) {
  switch (kind) {
    case SetupKind::monolingual:
      return "monolingual";
    case SetupKind::multilingual:
      return "multilingual";
    case SetupKind::crosslingual:
      return "crosslingual";
  }
  return "monolingual";
}

SetupKind setup_kind_from_string(const std::string& name) {
  if (name == "monolingual") return SetupKind::monolingual;
  if (name == "multilingual") return SetupKind::multilingual;
  if (name == "crosslingual") return SetupKind::crosslingual;
  throw UsageError("unknown setup kind '" + name +
                   "' (monolingual, multilingual, crosslingual)");
}

void ExperimentSetup::validate() const {
  if (train_languages.empty() || eval_languages.empty()) {
    throw UsageError("experiment setup needs at least one train and one eval language");
  }
  switch (kind) {
    case SetupKind::monolingual:
      if (train_languages.size() != 1 || train_languages != eval_languages) {
        throw UsageError("monolingual setup requires one language used for train and eval");
      }
      break;
    case SetupKind::multilingual:
      if (train_languages.size() < 2) {
        throw UsageError("multilingual setup requires at least two train languages");
      }
      break;
    case SetupKind::crosslingual: {
      bool unseen = false;
      for (const LanguageTag& language : eval_languages) {
        if (!train_languages.count(language)) unseen = true;
      }
      if (!unseen) {
        throw UsageError("crosslingual setup requires an eval language unseen in training");
      }
      break;
    }
  }
  if (equalize_total < 2 || equalize_total % 2 != 0) {
    throw UsageError("equalize_total must be an even number of at least 2");
  }
}

namespace {

const Corpus& require_train_split(const CorpusMap& corpora, const LanguageTag& language) {
  const auto it = corpora.find(language);
  if (it == corpora.end() || !it->second.train) {
    throw CorpusError("missing train split for language '" + language.code() + "'");
  }
  return *it->second.train;
}

const Corpus& require_test_split(const CorpusMap& corpora, const LanguageTag& language) {
  const auto it = corpora.find(language);
  if (it == corpora.end() || !it->second.test) {
    throw CorpusError("missing test split for language '" + language.code() + "'");
  }
  return *it->second.test;
}

}  // namespace

TrainingSet assemble_training_pairs(const ExperimentSetup& setup, const CorpusMap& corpora,
                                    std::uint64_t seed) {
  setup.validate();
  TrainingSet out;
  if (setup.train_languages.size() == 1) {
    const Corpus& corpus = require_train_split(corpora, *setup.train_languages.begin());
    out.pairs = flatten_references(corpus);
    out.records_per_language = corpus.language_counts();
    return out;
  }
  if (setup.train_languages.size() > 2) {
    throw UsageError("pooled training supports exactly two languages");
  }
  auto it = setup.train_languages.begin();
  const Corpus& first = require_train_split(corpora, *it);
  const Corpus& second = require_train_split(corpora, *std::next(it));
  const Corpus merged = equalize_bilingual(first, second, setup.equalize_total, seed);
  out.pairs = flatten_references(merged);
  out.records_per_language = merged.language_counts();
  Rng rng(seed);
  deterministic_shuffle(out.pairs, rng);
  return out;
}

std::map<LanguageTag, SystemRun> run_experiment(const ExperimentSetup& setup,
                                                const CorpusMap& corpora,
                                                DetoxModelBackend& backend,
                                                const TrainingConfig& config) {
  setup.validate();
  config.validate();
  const TrainingSet training = assemble_training_pairs(setup, corpora, config.seed);

  ModelHandle handle;
  try {
    handle = backend.fine_tune(training.pairs, config);
  } catch (const BackendError& e) {
    throw BackendError(to_string(setup.kind) + " training with backend '" + backend.id() +
                       "': " + e.what());
  }

  RunManifest manifest;
  manifest.system_id = backend.id() + "-" + to_string(setup.kind);
  manifest.backend_id = backend.id();
  manifest.setup = to_string(setup.kind);
  for (const LanguageTag& language : setup.train_languages) {
    manifest.train_languages.push_back(language.code());
  }
  for (const LanguageTag& language : setup.eval_languages) {
    manifest.eval_languages.push_back(language.code());
  }
  manifest.seed = config.seed;
  manifest.config = config.to_json();
  manifest.config["equalize_total"] = setup.equalize_total;
  manifest.notes["decoding"] = "greedy";
  manifest.notes["control_tokens"] = "none";
  manifest.notes["training_pairs"] = training.pairs.size();
  manifest.notes["records_per_language"] = training.records_per_language;
  manifest.generated_at = iso8601_now();

  std::map<LanguageTag, SystemRun> runs;
  for (const LanguageTag& language : setup.eval_languages) {
    const Corpus& test = require_test_split(corpora, language);
    SystemRun run;
    run.system_id = manifest.system_id;
    run.language = language;
    for (const DetoxPair& record : test.records()) {
      run.inputs.push_back(record.toxic);
    }
    try {
      run.outputs = backend.generate(handle, run.inputs, language);
    } catch (const BackendError& e) {
      throw BackendError(to_string(setup.kind) + " generation for language '" + language.code() +
                         "' with backend '" + backend.id() + "': " + e.what());
    }
    if (run.outputs.size() != run.inputs.size()) {
      throw BackendError("backend '" + backend.id() + "' returned " +
                         std::to_string(run.outputs.size()) + " outputs for " +
                         std::to_string(run.inputs.size()) + " inputs (language '" +
                         language.code() + "')");
    }
    run.manifest = manifest;
    runs.emplace(language, std::move(run));
  }
  return runs;
}

}  // namespace detox
