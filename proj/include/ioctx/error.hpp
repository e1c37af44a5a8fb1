#pragma once

#include <stdexcept>
#include <string>

namespace ioctx {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed argument, file, or configuration.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Training data cannot produce a model (single class, empty vocabulary, ...).
class DegenerateTraining : public Error {
 public:
  using Error::Error;
};

// A fitted transform or model was used before fit().
class NotFitted : public Error {
 public:
  using Error::Error;
};

}  // namespace ioctx
