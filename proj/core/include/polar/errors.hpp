#pragma once

#include <stdexcept>
#include <string>

namespace polar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph violates a structural precondition (e.g. disconnected).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A sampler exhausted its retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

class RenderError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent binary/JSON file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Invalid user input (configuration, arguments, schema consistency).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace polar
