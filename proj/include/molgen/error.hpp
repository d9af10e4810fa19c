#pragma once

#include <stdexcept>
#include <string>

namespace molgen {

// Every failure surfaced by the library derives from Error. The CLI maps the
// concrete categories onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside the operation's domain (empty input, bad size, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-finite value produced or consumed by a numeric routine.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (corpus files, checkpoints, logs).
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid or contradictory run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Failure talking to an LLM or embedding provider.
class ProviderError : public Error {
 public:
  using Error::Error;
};

// Retryable provider failure (timeouts, rate limits, 5xx).
class TransientProviderError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// Rejected credentials. Never retried.
class CredentialError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

}  // namespace molgen
