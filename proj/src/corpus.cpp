#include "detox/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "detox/rng.hpp"
#include "detox/text.hpp"

namespace detox {

LanguageTag::LanguageTag(std::string_view code) : code_(code) {
  if (code_.size() != 2 || code_[0] < 'a' || code_[0] > 'z' || code_[1] < 'a' || code_[1] > 'z') {
    throw UsageError("invalid language tag '" + code_ + "': expected two ASCII lowercase letters");
  }
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "dev") return Split::dev;
  if (name == "test") return Split::test;
  throw UsageError("unknown split label '" + std::string(name) + "': expected train, dev or test");
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "train";
}

namespace {

void validate_cell(const std::string& cell, std::size_t row, const char* what) {
  if (trim(cell).empty()) {
    throw CorpusError("row " + std::to_string(row) + ": empty " + what + " cell");
  }
  if (cell.find('\t') != std::string::npos || cell.find('\n') != std::string::npos) {
    throw CorpusError("row " + std::to_string(row) + ": " + what + " cell contains a tab or newline");
  }
}

void validate_record(const DetoxPair& record, std::size_t row) {
  validate_cell(record.toxic, row, "toxic");
  if (record.references.empty()) {
    throw CorpusError("row " + std::to_string(row) + ": record has no references");
  }
  for (const std::string& ref : record.references) validate_cell(ref, row, "reference");
  if (record.language.code().empty()) {
    throw CorpusError("row " + std::to_string(row) + ": record has no language tag");
  }
}

}  // namespace

Corpus::Corpus(std::vector<DetoxPair> records, Split split)
    : records_(std::move(records)), split_(split) {
  std::size_t row = 1;
  for (const DetoxPair& record : records_) {
    validate_record(record, row++);
    ++language_counts_[record.language.code()];
  }
}

std::string Corpus::to_tsv() const {
  std::string out;
  for (const DetoxPair& record : records_) {
    out += record.toxic;
    for (const std::string& ref : record.references) {
      out += '\t';
      out += ref;
    }
    out += '\n';
  }
  return out;
}

Corpus load_parallel_tsv(const std::filesystem::path& path, const LanguageTag& language, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CorpusError("cannot open corpus file: " + path.string());
  }

  std::vector<DetoxPair> records;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cells.size() < 2) {
      throw CorpusError("row " + std::to_string(row) + ": expected at least 2 tab-separated columns, got " +
                        std::to_string(cells.size()));
    }

    DetoxPair record;
    record.toxic = std::move(cells[0]);
    record.references.assign(std::make_move_iterator(cells.begin() + 1), std::make_move_iterator(cells.end()));
    record.language = language;
    validate_record(record, row);
    records.push_back(std::move(record));
  }
  if (records.empty()) {
    throw CorpusError("corpus file has no data rows: " + path.string());
  }
  return Corpus(std::move(records), split);
}

std::vector<FlatPair> flatten_references(const Corpus& corpus) {
  std::vector<FlatPair> flat;
  for (const DetoxPair& record : corpus.records()) {
    for (const std::string& ref : record.references) {
      flat.push_back({record.toxic, ref, record.language});
    }
  }
  return flat;
}

std::pair<Corpus, Corpus> split_train_dev(const Corpus& corpus, double dev_fraction, std::uint64_t seed) {
  if (!(dev_fraction > 0.0) || !(dev_fraction < 1.0)) {
    throw UsageError("dev_fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = corpus.size();
  if (n < 2) {
    throw CorpusError("corpus has " + std::to_string(n) + " records; need at least 2 to split");
  }
  std::size_t dev_count = static_cast<std::size_t>(std::llround(dev_fraction * static_cast<double>(n)));
  if (dev_count == 0) dev_count = 1;
  if (dev_count >= n) {
    throw CorpusError("dev fraction " + std::to_string(dev_fraction) + " leaves no training records for " +
                      std::to_string(n) + " inputs");
  }

  Rng rng(seed);
  const std::vector<std::size_t> dev_indices = sample_indices(n, dev_count, rng);

  std::vector<DetoxPair> train_records;
  std::vector<DetoxPair> dev_records;
  train_records.reserve(n - dev_count);
  dev_records.reserve(dev_count);
  std::size_t next_dev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (next_dev < dev_indices.size() && dev_indices[next_dev] == i) {
      dev_records.push_back(corpus.records()[i]);
      ++next_dev;
    } else {
      train_records.push_back(corpus.records()[i]);
    }
  }
  return {Corpus(std::move(train_records), Split::train), Corpus(std::move(dev_records), Split::dev)};
}

Corpus equalize_bilingual(const Corpus& corpus_a, const Corpus& corpus_b, std::size_t total,
                          std::uint64_t seed) {
  if (total < 2 || total % 2 != 0) {
    throw UsageError("equalized total must be a positive even number, got " + std::to_string(total));
  }
  if (!corpus_a.monolingual() || !corpus_b.monolingual()) {
    throw CorpusError("equalize_bilingual expects two monolingual corpora");
  }
  const std::string lang_a = corpus_a.language_counts().begin()->first;
  const std::string lang_b = corpus_b.language_counts().begin()->first;
  if (lang_a == lang_b) {
    throw CorpusError("equalize_bilingual expects corpora of two different languages, both are '" + lang_a +
                      "'");
  }
  if (corpus_a.split() != corpus_b.split()) {
    throw CorpusError("equalize_bilingual expects matching split labels");
  }

  const std::size_t half = total / 2;
  auto check_size = [&](const Corpus& corpus, const std::string& lang) {
    if (corpus.size() < half) {
      throw CorpusError("corpus '" + lang + "' has " + std::to_string(corpus.size()) + " records, need " +
                        std::to_string(half) + " (short by " + std::to_string(half - corpus.size()) + ")");
    }
  };
  check_size(corpus_a, lang_a);
  check_size(corpus_b, lang_b);

  Rng rng(seed);
  std::vector<DetoxPair> merged;
  merged.reserve(total);
  for (const Corpus* corpus : {&corpus_a, &corpus_b}) {
    for (std::size_t index : sample_indices(corpus->size(), half, rng)) {
      merged.push_back(corpus->records()[index]);
    }
  }
  deterministic_shuffle(merged, rng);
  return Corpus(std::move(merged), corpus_a.split());
}

}  // namespace detox
