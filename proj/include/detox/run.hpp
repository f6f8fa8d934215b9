#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detox/corpus.hpp"
#include "json.hpp"

namespace detox {

/// Provenance block written next to every run: which system produced the
/// outputs, from what setup and configuration. The timestamp lives here (and
/// only here) so the run artifacts themselves stay byte-reproducible.
struct RunManifest {
  std::string system_id;
  std::string backend_id;
  std::string setup;
  std::vector<std::string> train_languages;
  std::vector<std::string> eval_languages;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
  std::string generated_at;
};

/// One system's outputs over one language's test inputs, aligned 1:1.
struct SystemRun {
  std::string system_id;
  LanguageTag language;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  RunManifest manifest;
};

}  // namespace detox
