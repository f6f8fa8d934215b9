#pragma once

#include <stdexcept>
#include <string>

namespace detox {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments, thresholds, formats or preconditions. CLI exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Corpus file problems: missing files, malformed rows, empty cells.
class CorpusError : public Error {
 public:
  using Error::Error;
};

/// Lexicon file problems.
class LexiconError : public Error {
 public:
  using Error::Error;
};

/// Invalid or incomplete component configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A model backend failed or violated its contract. CLI exit code 2.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// A scorer backend failed. CLI exit code 2.
class ScorerError : public Error {
 public:
  using Error::Error;
};

/// A translator backend failed. CLI exit code 2.
class TranslatorError : public Error {
 public:
  using Error::Error;
};

}  // namespace detox
