#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace npiscope {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input; CLI exit code 2.
struct DataError : Error {
  using Error::Error;
};

/// Non-finite values or failed numerical contracts; CLI exit code 3.
struct NumericError : Error {
  using Error::Error;
};

struct UnbalancedBrackets : DataError {
  explicit UnbalancedBrackets(std::size_t pos)
      : DataError("unbalanced brackets at position " + std::to_string(pos)),
        position(pos) {}
  std::size_t position;
};

struct EmptyNode : DataError {
  explicit EmptyNode(std::size_t pos)
      : DataError("empty node at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

struct TrailingContent : DataError {
  explicit TrailingContent(std::size_t pos)
      : DataError("trailing content after tree at position " + std::to_string(pos)),
        position(pos) {}
  std::size_t position;
};

struct IndexOutOfRange : DataError {
  using DataError::DataError;
};

struct NotALicensor : DataError {
  using DataError::DataError;
};

struct NoPpiCounterpart : DataError {
  using DataError::DataError;
};

struct EmptySentence : DataError {
  EmptySentence() : DataError("empty sentence") {}
};

struct EmptyCorpus : DataError {
  EmptyCorpus() : DataError("empty corpus") {}
};

struct DimensionMismatch : DataError {
  explicit DimensionMismatch(const std::string& what, std::size_t line = 0)
      : DataError(what), line(line) {}
  std::size_t line;
};

struct EmptyFile : DataError {
  using DataError::DataError;
};

struct DegenerateData : DataError {
  using DataError::DataError;
};

struct EmptyTestSet : DataError {
  EmptyTestSet() : DataError("empty test set") {}
};

struct BothZero : DataError {
  BothZero() : DataError("relative difference undefined for a + b == 0") {}
};

struct LengthMismatch : DataError {
  using DataError::DataError;
};

struct ConstantInput : DataError {
  using DataError::DataError;
};

struct NoValidPairs : DataError {
  using DataError::DataError;
};

struct InfeasibleDistance : DataError {
  using DataError::DataError;
};

struct ConfigInvalid : DataError {
  using DataError::DataError;
};

struct BadCheckpoint : DataError {
  using DataError::DataError;
};

struct DivergenceDetected : NumericError {
  using NumericError::NumericError;
};

}  // namespace npiscope
