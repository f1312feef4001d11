#pragma once

#include <stdexcept>

namespace ats {

// Root of everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Categories, one per CLI exit code.
struct ConfigError : Error {       // exit code 2
  using Error::Error;
};
struct DataError : Error {         // exit code 3
  using Error::Error;
};
struct ModelFormatError : Error {  // exit code 4
  using Error::Error;
};
struct NumericError : Error {      // exit code 5
  using Error::Error;
};

struct ShapeMismatch : NumericError {
  using NumericError::NumericError;
};
struct EmptyMask : NumericError {
  using NumericError::NumericError;
};
struct EmptyAttentionSupport : NumericError {
  using NumericError::NumericError;
};
struct NonFiniteLoss : NumericError {
  using NumericError::NumericError;
};

struct IdOutOfRange : DataError {
  using DataError::DataError;
};
struct EmptyCorpus : DataError {
  using DataError::DataError;
};
struct DatasetNotFound : DataError {
  using DataError::DataError;
};
struct TooFewExamples : DataError {
  using DataError::DataError;
};
struct EmptyAfterCleaning : DataError {
  using DataError::DataError;
};

struct BadMagic : ModelFormatError {
  using ModelFormatError::ModelFormatError;
};
struct ModelVersionMismatch : ModelFormatError {
  using ModelFormatError::ModelFormatError;
};
struct CorruptSection : ModelFormatError {
  using ModelFormatError::ModelFormatError;
};

}  // namespace ats
