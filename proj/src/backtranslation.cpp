#include "detox/backtranslation.hpp"

#include <fstream>

namespace detox {

std::vector<std::string> IdentityTranslator::translate(const std::vector<std::string>& texts,
                                                       const LanguageTag& source,
                                                       const LanguageTag& target) {
  (void)source;
  (void)target;
  return texts;
}

FileTranslatorStub FileTranslatorStub::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open translator table: " + path.string());
  }
  FileTranslatorStub stub;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
      const std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        throw ConfigError("translator table line " + std::to_string(line_number) +
                          ": expected 4 tab-separated columns");
      }
      cells.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    cells.push_back(line.substr(pos));
    stub.table_[{cells[0], cells[1], cells[2]}] = cells[3];
  }
  return stub;
}

std::vector<std::string> FileTranslatorStub::translate(const std::vector<std::string>& texts,
                                                       const LanguageTag& source,
                                                       const LanguageTag& target) {
  std::vector<std::string> outputs;
  outputs.reserve(texts.size());
  for (const std::string& text : texts) {
    const auto it = table_.find({source.code(), target.code(), text});
    if (it == table_.end()) {
      throw TranslatorError("no " + source.code() + "->" + target.code() +
                            " mapping for: " + text);
    }
    outputs.push_back(it->second);
  }
  return outputs;
}

namespace {

std::vector<std::string> translate_hop(TranslatorBackend& translator,
                                       const std::vector<std::string>& texts,
                                       const LanguageTag& source, const LanguageTag& target,
                                       const char* hop) {
  std::vector<std::string> outputs;
  try {
    outputs = translator.translate(texts, source, target);
  } catch (const TranslatorError& e) {
    throw TranslatorError(std::string(hop) + " hop (" + source.code() + "->" + target.code() +
                          "): " + e.what());
  }
  if (outputs.size() != texts.size()) {
    throw TranslatorError(std::string(hop) + " hop (" + source.code() + "->" + target.code() +
                          "): got " + std::to_string(outputs.size()) + " translations for " +
                          std::to_string(texts.size()) + " inputs");
  }
  return outputs;
}

}  // namespace

BacktranslationResult backtranslate_detox(const std::vector<std::string>& texts,
                                          const LanguageTag& source, const LanguageTag& pivot,
                                          TranslatorBackend& translator,
                                          const BatchDetoxFn& detoxify) {
  if (source == pivot) {
    throw UsageError("back-translation needs distinct source and pivot languages");
  }
  const std::vector<std::string> pivot_texts =
      translate_hop(translator, texts, source, pivot, "forward");

  const std::vector<std::string> detoxed = detoxify(pivot_texts);
  if (detoxed.size() != pivot_texts.size()) {
    throw BackendError("pivot detoxifier returned " + std::to_string(detoxed.size()) +
                       " outputs for " + std::to_string(pivot_texts.size()) + " inputs");
  }

  const std::vector<std::string> back =
      translate_hop(translator, detoxed, pivot, source, "return");

  BacktranslationResult result;
  result.outputs = back;
  result.provenance.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    result.provenance.push_back({texts[i], pivot_texts[i], detoxed[i], back[i]});
  }
  return result;
}

}  // namespace detox
