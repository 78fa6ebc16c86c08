#pragma once

#include <stdexcept>
#include <string>

namespace sharedword {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad dataset contents or unreadable input files.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration, flags, or backend spec strings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed arguments handed to a model, LM, or tokenizer.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Transport-level adapter failure (connection refused, peer closed, ...).
// Callers may retry these; they never indicate a bad request.
class TransportError : public Error {
 public:
  using Error::Error;
  bool retryable() const { return true; }
};

// The adapter peer answered, but the answer violates the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace sharedword
