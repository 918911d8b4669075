#pragma once

#include <stdexcept>
#include <string>

namespace dcx {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or degenerate input data. CLI exit code 1.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters, unusable flag combinations, missing files. CLI exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyVocabularyError : public DataError {
 public:
  using DataError::DataError;
};

class OverTrimmedError : public DataError {
 public:
  using DataError::DataError;
};

class TooShortError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateSampleError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace dcx
