#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dualk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations on arguments (ranges, non-finite values, empty inputs).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Classification with no generative features in any class model.
class NoGenerativeFeatures : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class PersistenceError : public Error {
 public:
  using Error::Error;
};

class VersionError : public PersistenceError {
 public:
  using PersistenceError::PersistenceError;
};

class CorruptFileError : public PersistenceError {
 public:
  using PersistenceError::PersistenceError;
};

class SchemaError : public PersistenceError {
 public:
  using PersistenceError::PersistenceError;
};

}  // namespace dualk
