#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "detox/corpus.hpp"
#include "detox/error.hpp"

namespace detox {

/// Machine translation contract: one output per input, in order. Backends
/// talking to external services surface failures as TranslatorError.
class TranslatorBackend {
 public:
  virtual ~TranslatorBackend() = default;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> translate(const std::vector<std::string>& texts,
                                             const LanguageTag& source,
                                             const LanguageTag& target) = 0;
};

/// Returns inputs unchanged for any language pair.
class IdentityTranslator : public TranslatorBackend {
 public:
  std::string id() const override { return "identity"; }
  std::vector<std::string> translate(const std::vector<std::string>& texts,
                                     const LanguageTag& source,
                                     const LanguageTag& target) override;
};

/// Fixed sentence table loaded from TSV:
/// source_lang \t target_lang \t source_text \t target_text.
/// A sentence without a mapping raises TranslatorError.
class FileTranslatorStub : public TranslatorBackend {
 public:
  static FileTranslatorStub from_file(const std::filesystem::path& path);

  std::string id() const override { return "file-stub"; }
  std::vector<std::string> translate(const std::vector<std::string>& texts,
                                     const LanguageTag& source,
                                     const LanguageTag& target) override;

 private:
  FileTranslatorStub() = default;

  std::map<std::tuple<std::string, std::string, std::string>, std::string> table_;
};

/// Detoxifies a batch of pivot-language sentences, aligned 1:1.
using BatchDetoxFn = std::function<std::vector<std::string>(const std::vector<std::string>&)>;

/// Audit trail for one sentence through the pipeline.
struct SentenceProvenance {
  std::string source;
  std::string pivot;
  std::string detoxed_pivot;
  std::string output;
};

struct BacktranslationResult {
  std::vector<std::string> outputs;
  std::vector<SentenceProvenance> provenance;
};

/// translate(source -> pivot), detoxify in the pivot language, translate
/// back. Errors name the failing hop; any alignment violation is fatal.
/// Provenance is always retained: diagnosing why a back-translated system
/// underperforms requires the intermediate texts.
BacktranslationResult backtranslate_detox(const std::vector<std::string>& texts,
                                          const LanguageTag& source, const LanguageTag& pivot,
                                          TranslatorBackend& translator,
                                          const BatchDetoxFn& detoxify);

}  // namespace detox
