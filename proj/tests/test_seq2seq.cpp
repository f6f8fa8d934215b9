#include <string>
#include <vector>

#include "detox/baselines.hpp"
#include "detox/harness.hpp"
#include "detox/seq2seq.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace detox;

namespace {

CorpusMap fixture_corpora() {
  CorpusMap corpora;
  corpora[LanguageTag("en")].train =
      load_parallel_tsv(fixtures_dir() / "en_train.tsv", LanguageTag("en"), Split::train);
  corpora[LanguageTag("en")].test =
      load_parallel_tsv(fixtures_dir() / "en_test.tsv", LanguageTag("en"), Split::test);
  corpora[LanguageTag("ru")].train =
      load_parallel_tsv(fixtures_dir() / "ru_train.tsv", LanguageTag("ru"), Split::train);
  corpora[LanguageTag("ru")].test =
      load_parallel_tsv(fixtures_dir() / "ru_test.tsv", LanguageTag("ru"), Split::test);
  return corpora;
}

ToxicLexicon en_lexicon() {
  return load_lexicon(fixtures_dir() / "toxic_en.txt", LanguageTag("en"));
}

/// Violates the one-output-per-input contract on purpose.
struct MisalignedBackend : DetoxModelBackend {
  std::string id() const override { return "misaligned"; }
  ModelHandle fine_tune(const std::vector<FlatPair>&, const TrainingConfig&) override {
    auto model = std::make_shared<TrainedModel>();
    model->backend_id = id();
    return model;
  }
  std::vector<std::string> generate(const ModelHandle&, const std::vector<std::string>& texts,
                                    const LanguageTag&) override {
    std::vector<std::string> outputs(texts.begin(), texts.end());
    if (!outputs.empty()) outputs.pop_back();
    return outputs;
  }
};

struct FailingTrainer : DetoxModelBackend {
  std::string id() const override { return "failing"; }
  ModelHandle fine_tune(const std::vector<FlatPair>&, const TrainingConfig&) override {
    throw BackendError("checkpoint server unreachable");
  }
  std::vector<std::string> generate(const ModelHandle&, const std::vector<std::string>& texts,
                                    const LanguageTag&) override {
    return texts;
  }
};

}  // namespace

TEST_CASE("training config validation catches bad hyperparameters") {
  TrainingConfig config;
  CHECK_NOTHROW(config.validate());

  config.learning_rate = 0.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = TrainingConfig{};
  config.warmup_steps = 1001;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = TrainingConfig{};
  config.max_iterations = 100;  // now warmup 500 > max_iterations
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = TrainingConfig{};
  config.batch_size = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = TrainingConfig{};
  config.schedule = "cosine";
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = TrainingConfig{};
  config.checkpoint_every = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("model presets pin the iteration budgets") {
  CHECK(TrainingConfig::mt5_defaults().max_iterations == 40000);
  CHECK_NOTHROW(TrainingConfig::mt5_defaults().validate());
  CHECK(TrainingConfig::mbart_defaults(3000).max_iterations == 3000);
  CHECK(TrainingConfig::mbart_defaults(10000).max_iterations == 10000);
  CHECK_THROWS_AS(TrainingConfig::mbart_defaults(2000), ConfigError);
  CHECK_THROWS_AS(TrainingConfig::mbart_defaults(0), ConfigError);

  const auto doc = TrainingConfig::mt5_defaults().to_json();
  CHECK(doc.at("max_iterations") == 40000);
  CHECK(doc.at("schedule") == "linear-decay");
}

TEST_CASE("setup kinds parse and validate their language sets") {
  CHECK(setup_kind_from_string("monolingual") == SetupKind::monolingual);
  CHECK(to_string(SetupKind::crosslingual) == "crosslingual");
  CHECK_THROWS_AS(setup_kind_from_string("zero-shot"), UsageError);

  ExperimentSetup setup;
  setup.kind = SetupKind::monolingual;
  setup.train_languages = {LanguageTag("en")};
  setup.eval_languages = {LanguageTag("en")};
  CHECK_NOTHROW(setup.validate());
  setup.eval_languages = {LanguageTag("ru")};
  CHECK_THROWS_AS(setup.validate(), UsageError);

  setup.kind = SetupKind::multilingual;
  setup.train_languages = {LanguageTag("en"), LanguageTag("ru")};
  setup.eval_languages = {LanguageTag("en"), LanguageTag("ru")};
  CHECK_NOTHROW(setup.validate());
  setup.train_languages = {LanguageTag("en")};
  CHECK_THROWS_AS(setup.validate(), UsageError);

  setup.kind = SetupKind::crosslingual;
  setup.train_languages = {LanguageTag("en")};
  setup.eval_languages = {LanguageTag("ru")};
  CHECK_NOTHROW(setup.validate());
  setup.eval_languages = {LanguageTag("en")};  // nothing unseen
  CHECK_THROWS_AS(setup.validate(), UsageError);

  setup.eval_languages = {LanguageTag("ru")};
  setup.equalize_total = 9;
  CHECK_THROWS_AS(setup.validate(), UsageError);
  setup.equalize_total = 0;
  CHECK_THROWS_AS(setup.validate(), UsageError);

  setup = ExperimentSetup{};
  setup.train_languages.clear();
  CHECK_THROWS_AS(setup.validate(), UsageError);
}

TEST_CASE("single-language training flattens the train split as-is") {
  ExperimentSetup setup;
  setup.train_languages = {LanguageTag("en")};
  setup.eval_languages = {LanguageTag("en")};
  const auto training = assemble_training_pairs(setup, fixture_corpora(), 1);
  CHECK(training.pairs.size() == 17);  // sum of reference counts
  CHECK(training.records_per_language.at("en") == 7);
  CHECK(training.pairs[0].toxic ==
        "my computer is broken and my phone too!! wtf is this devil sh*t???");
}

TEST_CASE("two-language training equalizes and shuffles deterministically") {
  ExperimentSetup setup;
  setup.kind = SetupKind::multilingual;
  setup.train_languages = {LanguageTag("en"), LanguageTag("ru")};
  setup.eval_languages = {LanguageTag("en"), LanguageTag("ru")};
  setup.equalize_total = 10;
  const CorpusMap corpora = fixture_corpora();

  const auto a = assemble_training_pairs(setup, corpora, 42);
  const auto b = assemble_training_pairs(setup, corpora, 42);
  CHECK(a.records_per_language.at("en") == 5);
  CHECK(a.records_per_language.at("ru") == 5);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].toxic == b.pairs[i].toxic);
    CHECK(a.pairs[i].reference == b.pairs[i].reference);
  }
  for (const auto& pair : a.pairs) {
    const std::string code = pair.language.code();
    CHECK((code == "en" || code == "ru"));
  }
}

TEST_CASE("pooled training rejects more than two languages") {
  ExperimentSetup setup;
  setup.kind = SetupKind::multilingual;
  setup.train_languages = {LanguageTag("en"), LanguageTag("ru"), LanguageTag("de")};
  setup.eval_languages = {LanguageTag("en")};
  CHECK(error_message<UsageError>([&] { assemble_training_pairs(setup, fixture_corpora(), 1); })
            .find("exactly two") != std::string::npos);
}

TEST_CASE("missing splits are reported with their language") {
  ExperimentSetup setup;
  setup.train_languages = {LanguageTag("de")};
  setup.eval_languages = {LanguageTag("de")};
  const std::string msg = error_message<CorpusError>(
      [&] { assemble_training_pairs(setup, fixture_corpora(), 1); });
  CHECK(msg.find("train split") != std::string::npos);
  CHECK(msg.find("'de'") != std::string::npos);
}

TEST_CASE("copy backend echoes inputs and guards its handle") {
  CopyBackend backend;
  const ModelHandle handle = backend.fine_tune({}, TrainingConfig{});
  REQUIRE(handle);
  CHECK(handle->backend_id == "copy");
  const std::vector<std::string> texts{"a", "б"};
  CHECK(backend.generate(handle, texts, LanguageTag("en")) == texts);

  CHECK_THROWS_AS(backend.generate(nullptr, texts, LanguageTag("en")), BackendError);
  auto foreign = std::make_shared<TrainedModel>();
  foreign->backend_id = "other";
  CHECK_THROWS_AS(backend.generate(foreign, texts, LanguageTag("en")), BackendError);
}

TEST_CASE("lexicon-delete backend applies deletion row by row") {
  LexiconDeleteBackend backend(en_lexicon());
  const ModelHandle handle = backend.fine_tune({}, TrainingConfig{});
  const std::vector<std::string> texts{"sh*t is crazy around here", "Delete the page."};
  const auto outputs = backend.generate(handle, texts, LanguageTag("en"));
  REQUIRE(outputs.size() == 2);
  CHECK(outputs[0] == delete_detox(texts[0], en_lexicon()).output);
  CHECK(outputs[1] == texts[1]);

  LexiconDeleteBackend bare(std::nullopt);
  CHECK_THROWS_AS(bare.fine_tune({}, TrainingConfig{}), ConfigError);
}

TEST_CASE("reference backends are constructed by name") {
  CHECK(make_reference_backend("copy", std::nullopt)->id() == "copy");
  CHECK(make_reference_backend("lexicon-delete", en_lexicon())->id() == "lexicon-delete");
  CHECK_THROWS_AS(make_reference_backend("mbart", std::nullopt), UsageError);
}

TEST_CASE("monolingual copy experiment echoes the test split") {
  ExperimentSetup setup;
  setup.train_languages = {LanguageTag("en")};
  setup.eval_languages = {LanguageTag("en")};
  CopyBackend backend;
  const auto runs = run_experiment(setup, fixture_corpora(), backend, TrainingConfig{});
  REQUIRE(runs.size() == 1);
  const SystemRun& run = runs.at(LanguageTag("en"));
  CHECK(run.system_id == "copy-monolingual");
  CHECK(run.inputs.size() == 5);
  CHECK(run.outputs == run.inputs);

  const CopyRates rates = copy_rate(run.inputs, run.outputs);
  CHECK(rates.exact == 1.0);
  CHECK(rates.near == 1.0);

  const RunManifest& m = run.manifest;
  CHECK(m.backend_id == "copy");
  CHECK(m.setup == "monolingual");
  CHECK(m.train_languages == std::vector<std::string>{"en"});
  CHECK(m.eval_languages == std::vector<std::string>{"en"});
  CHECK(m.notes.at("decoding") == "greedy");
  CHECK(m.notes.at("control_tokens") == "none");
  CHECK(m.notes.at("training_pairs") == 17);
  CHECK(m.notes.at("records_per_language").at("en") == 7);
  CHECK(!m.generated_at.empty());
}

TEST_CASE("crosslingual transfer with a foreign lexicon copies the eval inputs") {
  // A deletion backend armed only with the English vocabulary cannot touch
  // Russian text: every Russian output comes back verbatim, while English
  // text with lexicon words is always changed.
  ExperimentSetup setup;
  setup.kind = SetupKind::crosslingual;
  setup.train_languages = {LanguageTag("en")};
  setup.eval_languages = {LanguageTag("ru")};
  LexiconDeleteBackend backend(en_lexicon());
  const auto runs = run_experiment(setup, fixture_corpora(), backend, TrainingConfig{});
  const SystemRun& ru_run = runs.at(LanguageTag("ru"));
  CHECK(ru_run.outputs == ru_run.inputs);
  CHECK(copy_rate(ru_run.inputs, ru_run.outputs).exact == 1.0);
  CHECK(ru_run.system_id == "lexicon-delete-crosslingual");

  ExperimentSetup mono;
  mono.train_languages = {LanguageTag("en")};
  mono.eval_languages = {LanguageTag("en")};
  const auto en_runs = run_experiment(mono, fixture_corpora(), backend, TrainingConfig{});
  const SystemRun& en_run = en_runs.at(LanguageTag("en"));
  CHECK(copy_rate(en_run.inputs, en_run.outputs).exact == 0.0);
}

TEST_CASE("multilingual experiment produces one run per eval language") {
  ExperimentSetup setup;
  setup.kind = SetupKind::multilingual;
  setup.train_languages = {LanguageTag("en"), LanguageTag("ru")};
  setup.eval_languages = {LanguageTag("en"), LanguageTag("ru")};
  setup.equalize_total = 10;
  CopyBackend backend;
  TrainingConfig config;
  config.seed = 42;
  const auto runs = run_experiment(setup, fixture_corpora(), backend, config);
  REQUIRE(runs.size() == 2);
  CHECK(runs.at(LanguageTag("en")).inputs.size() == 5);
  CHECK(runs.at(LanguageTag("ru")).inputs.size() == 4);
  CHECK(runs.at(LanguageTag("en")).manifest.notes.at("records_per_language").at("ru") == 5);
  CHECK(runs.at(LanguageTag("en")).manifest.seed == 42);
  CHECK(runs.at(LanguageTag("en")).manifest.config.at("equalize_total") == 10);

  const auto again = run_experiment(setup, fixture_corpora(), backend, config);
  CHECK(runs.at(LanguageTag("ru")).outputs == again.at(LanguageTag("ru")).outputs);
}

TEST_CASE("misaligned generation is rejected with counts in the message") {
  ExperimentSetup setup;
  setup.train_languages = {LanguageTag("en")};
  setup.eval_languages = {LanguageTag("en")};
  MisalignedBackend backend;
  const std::string msg = error_message<BackendError>(
      [&] { run_experiment(setup, fixture_corpora(), backend, TrainingConfig{}); });
  CHECK(msg.find("4 outputs for 5 inputs") != std::string::npos);
}

TEST_CASE("training failures carry the experiment context") {
  ExperimentSetup setup;
  setup.train_languages = {LanguageTag("en")};
  setup.eval_languages = {LanguageTag("en")};
  FailingTrainer backend;
  const std::string msg = error_message<BackendError>(
      [&] { run_experiment(setup, fixture_corpora(), backend, TrainingConfig{}); });
  CHECK(msg.find("monolingual training with backend 'failing'") != std::string::npos);
  CHECK(msg.find("checkpoint server unreachable") != std::string::npos);
}
