#pragma once

#include <stdexcept>
#include <string>

namespace argprobe {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (lexicon, templates, score files, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A referenced id does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Request rejected by the annotation service (range, duplicate, capacity).
class RejectedError : public Error {
 public:
  using Error::Error;
};

}  // namespace argprobe
