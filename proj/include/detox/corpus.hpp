#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "detox/error.hpp"

namespace detox {

/// Two-letter lowercase language identifier ("en", "ru", ...).
class LanguageTag {
 public:
  LanguageTag() = default;
  explicit LanguageTag(std::string_view code);

  const std::string& code() const { return code_; }

  friend bool operator==(const LanguageTag&, const LanguageTag&) = default;
  friend auto operator<=>(const LanguageTag&, const LanguageTag&) = default;

 private:
  std::string code_;
};

enum class Split { train, dev, test };

Split split_from_string(std::string_view name);
std::string_view to_string(Split split);

/// One toxic source sentence with at least one polite reference paraphrase.
struct DetoxPair {
  std::string toxic;
  std::vector<std::string> references;
  LanguageTag language;
};

/// Immutable collection of detox pairs with per-language bookkeeping.
class Corpus {
 public:
  Corpus(std::vector<DetoxPair> records, Split split);

  const std::vector<DetoxPair>& records() const { return records_; }
  Split split() const { return split_; }
  const std::map<std::string, std::size_t>& language_counts() const { return language_counts_; }
  std::size_t size() const { return records_.size(); }

  /// True when every record carries the same language tag.
  bool monolingual() const { return language_counts_.size() == 1; }

  /// Serializes back to the on-disk TSV shape: toxic \t ref1 [\t ref2 ...].
  std::string to_tsv() const;

 private:
  std::vector<DetoxPair> records_;
  Split split_;
  std::map<std::string, std::size_t> language_counts_;
};

/// (toxic, single reference, language) triple for training backends.
struct FlatPair {
  std::string toxic;
  std::string reference;
  LanguageTag language;
};

/// Loads a UTF-8 TSV file with no header: toxic \t ref1 [\t ref2 ...].
/// Cell content is kept verbatim; validation only checks that every cell is
/// non-empty after trimming. Errors name the offending 1-based row.
Corpus load_parallel_tsv(const std::filesystem::path& path, const LanguageTag& language, Split split);

/// Expands every (toxic, reference) combination into one triple, in record
/// order then reference order.
std::vector<FlatPair> flatten_references(const Corpus& corpus);

/// Deterministically carves off round(dev_fraction * size) records (at least
/// one) as the dev split. Both outputs preserve the input record order.
std::pair<Corpus, Corpus> split_train_dev(const Corpus& corpus, double dev_fraction, std::uint64_t seed);

inline std::pair<Corpus, Corpus> split_train_dev(const Corpus& corpus, std::uint64_t seed) {
  return split_train_dev(corpus, 0.05, seed);
}

/// Samples total/2 records per language from two monolingual corpora of
/// different languages and shuffles the merged result. Both corpora must
/// carry the same split label.
Corpus equalize_bilingual(const Corpus& corpus_a, const Corpus& corpus_b, std::size_t total,
                          std::uint64_t seed);

}  // namespace detox
