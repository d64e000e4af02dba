#pragma once

#include <stdexcept>
#include <string>

namespace fuzzymatch {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or precondition violation detected before any work.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Malformed input data (bad CSV row, invalid label, empty entity string).
class InputError : public Error {
public:
  using Error::Error;
};

class InvalidLabelError : public InputError {
public:
  using InputError::InputError;
};

// Metric is undefined for the given data, e.g. no positive labels.
class UndefinedMetricError : public Error {
public:
  using Error::Error;
};

class TemplateError : public Error {
public:
  using Error::Error;
};

// A single provider call failed. Retried by the scorer when retryable.
class ProviderError : public Error {
public:
  explicit ProviderError(const std::string &what, bool retryable = true)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

private:
  bool retryable_;
};

// Provider still failing after the retry budget was spent.
class TransportError : public Error {
public:
  TransportError(const std::string &what, int attempts)
      : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

private:
  int attempts_;
};

// Reply could not be turned into a confidence. Carries the raw reply.
class ReplyParseError : public Error {
public:
  ReplyParseError(const std::string &what, std::string raw_reply)
      : Error(what), raw_reply_(std::move(raw_reply)) {}
  const std::string &raw_reply() const { return raw_reply_; }

private:
  std::string raw_reply_;
};

class UnparsableReply : public ReplyParseError {
public:
  using ReplyParseError::ReplyParseError;
};

class OutOfRangeReply : public ReplyParseError {
public:
  using ReplyParseError::ReplyParseError;
};

class CacheError : public Error {
public:
  using Error::Error;
};

class TrainingDataError : public Error {
public:
  using Error::Error;
};

// Model file could not be loaded (malformed JSON, version, schema).
class ModelFormatError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace fuzzymatch
