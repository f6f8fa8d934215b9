#include <string>
#include <vector>

#include "detox/backtranslation.hpp"
#include "detox/baselines.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace detox;

namespace {

ToxicLexicon en_lexicon() {
  return load_lexicon(fixtures_dir() / "toxic_en.txt", LanguageTag("en"));
}

BatchDetoxFn delete_in_english() {
  return [](const std::vector<std::string>& texts) {
    const ToxicLexicon lex = load_lexicon(fixtures_dir() / "toxic_en.txt", LanguageTag("en"));
    std::vector<std::string> out;
    out.reserve(texts.size());
    for (const auto& text : texts) out.push_back(delete_detox(text, lex).output);
    return out;
  };
}

BatchDetoxFn identity_detox() {
  return [](const std::vector<std::string>& texts) { return texts; };
}

/// Drops the last output to violate alignment.
struct MisalignedTranslator : TranslatorBackend {
  std::string id() const override { return "misaligned"; }
  std::vector<std::string> translate(const std::vector<std::string>& texts, const LanguageTag&,
                                     const LanguageTag&) override {
    std::vector<std::string> out(texts.begin(), texts.end());
    if (!out.empty()) out.pop_back();
    return out;
  }
};

}  // namespace

TEST_CASE("identity translator with identity detox is a no-op with full provenance") {
  IdentityTranslator translator;
  const std::vector<std::string> texts{"раз", "два"};
  const auto result = backtranslate_detox(texts, LanguageTag("ru"), LanguageTag("en"),
                                          translator, identity_detox());
  CHECK(result.outputs == texts);
  REQUIRE(result.provenance.size() == 2);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    CHECK(result.provenance[i].source == texts[i]);
    CHECK(result.provenance[i].pivot == texts[i]);
    CHECK(result.provenance[i].detoxed_pivot == texts[i]);
    CHECK(result.provenance[i].output == texts[i]);
  }
}

TEST_CASE("identity translator reduces the pipeline to the pivot detoxifier") {
  IdentityTranslator translator;
  const ToxicLexicon lex = en_lexicon();
  const std::vector<std::string> texts{"sh*t is crazy around here", "Delete the page."};
  const auto result = backtranslate_detox(texts, LanguageTag("ru"), LanguageTag("en"),
                                          translator, delete_in_english());
  REQUIRE(result.outputs.size() == 2);
  CHECK(result.outputs[0] == delete_detox(texts[0], lex).output);
  CHECK(result.outputs[1] == texts[1]);
  CHECK(result.provenance[0].detoxed_pivot == result.outputs[0]);
}

TEST_CASE("file-stub translation round trips through the pivot language") {
  FileTranslatorStub translator =
      FileTranslatorStub::from_file(fixtures_dir() / "translator_ru_en.tsv");
  const std::vector<std::string> texts{
      "Не поверишь, сколько е**нутых на планете.",
      "А нахрена тогда ты здесь это писал?",
  };
  const auto result = backtranslate_detox(texts, LanguageTag("ru"), LanguageTag("en"),
                                          translator, delete_in_english());
  REQUIRE(result.outputs.size() == 2);
  CHECK(result.outputs[0] == "Не поверишь сколько таких на планете.");
  CHECK(result.outputs[1] == "Зачем ты это писал?");

  REQUIRE(result.provenance.size() == 2);
  CHECK(result.provenance[0].pivot ==
        "You won't believe how many f*cked up people are on the planet.");
  CHECK(result.provenance[0].detoxed_pivot ==
        "You won't believe how many up people are on the planet.");
  CHECK(result.provenance[1].pivot == "Why the f*ck did you post it here?");
  CHECK(result.provenance[1].detoxed_pivot == "Why the did you post it here?");

  // The stored intermediates re-derive the stored outputs: the trail is a
  // faithful record, not a best-effort log.
  const auto redo = delete_in_english()({result.provenance[0].pivot, result.provenance[1].pivot});
  CHECK(redo[0] == result.provenance[0].detoxed_pivot);
  CHECK(redo[1] == result.provenance[1].detoxed_pivot);
}

TEST_CASE("missing translations name the failing hop") {
  FileTranslatorStub translator =
      FileTranslatorStub::from_file(fixtures_dir() / "translator_ru_en.tsv");

  const std::string forward = error_message<TranslatorError>([&] {
    backtranslate_detox({"нет такого предложения"}, LanguageTag("ru"), LanguageTag("en"),
                        translator, identity_detox());
  });
  CHECK(forward.find("forward hop") != std::string::npos);
  CHECK(forward.find("ru->en") != std::string::npos);

  // The forward mapping exists but the detoxed pivot is not in the return
  // table, so the return hop fails.
  const std::string back = error_message<TranslatorError>([&] {
    backtranslate_detox({"А нахрена тогда ты здесь это писал?"}, LanguageTag("ru"),
                        LanguageTag("en"), translator,
                        [](const std::vector<std::string>& texts) {
                          return std::vector<std::string>(texts.size(), "unmapped sentence");
                        });
  });
  CHECK(back.find("return hop") != std::string::npos);
  CHECK(back.find("en->ru") != std::string::npos);
}

TEST_CASE("source and pivot must differ") {
  IdentityTranslator translator;
  CHECK_THROWS_AS(backtranslate_detox({"x"}, LanguageTag("en"), LanguageTag("en"), translator,
                                      identity_detox()),
                  UsageError);
}

TEST_CASE("alignment violations are fatal") {
  MisalignedTranslator translator;
  const std::string msg = error_message<TranslatorError>([&] {
    backtranslate_detox({"a", "b"}, LanguageTag("ru"), LanguageTag("en"), translator,
                        identity_detox());
  });
  CHECK(msg.find("forward hop") != std::string::npos);
  CHECK(msg.find("1 translations for 2 inputs") != std::string::npos);

  IdentityTranslator ok;
  CHECK_THROWS_AS(backtranslate_detox({"a", "b"}, LanguageTag("ru"), LanguageTag("en"), ok,
                                      [](const std::vector<std::string>&) {
                                        return std::vector<std::string>{"only one"};
                                      }),
                  BackendError);
}

TEST_CASE("empty input yields an empty result") {
  IdentityTranslator translator;
  const auto result = backtranslate_detox({}, LanguageTag("ru"), LanguageTag("en"), translator,
                                          identity_detox());
  CHECK(result.outputs.empty());
  CHECK(result.provenance.empty());
}

TEST_CASE("translator tables are validated at load time") {
  const auto bad = write_tmp_file("bad_translator.tsv", "ru\ten\tonly three columns\n");
  CHECK(error_message<ConfigError>([&] { FileTranslatorStub::from_file(bad); })
            .find("line 1") != std::string::npos);
  CHECK_THROWS_AS(FileTranslatorStub::from_file(fixtures_dir() / "missing.tsv"), ConfigError);

  // Comments and blank lines are fine.
  const auto ok = write_tmp_file("ok_translator.tsv", "# comment\n\nru\ten\tпривет\thello\n");
  FileTranslatorStub stub = FileTranslatorStub::from_file(ok);
  CHECK(stub.translate({"привет"}, LanguageTag("ru"), LanguageTag("en")) ==
        std::vector<std::string>{"hello"});
  CHECK_THROWS_AS(stub.translate({"привет"}, LanguageTag("en"), LanguageTag("ru")),
                  TranslatorError);
}
