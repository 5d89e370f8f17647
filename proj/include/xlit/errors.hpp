#pragma once

#include <stdexcept>
#include <string>

namespace xlit {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input files, malformed table lines, invalid run configs. CLI exit 2.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Completion backend failures: transport exhaustion, replay miss. CLI exit 3.
struct BackendError : Error {
  explicit BackendError(const std::string& msg) : Error(msg) {}
};

// Replay cassette has no entry for a request. Carries the request hash.
struct ReplayMissError : BackendError {
  ReplayMissError(const std::string& msg, std::string hash)
      : BackendError(msg), request_hash(std::move(hash)) {}
  std::string request_hash;
};

// The server rejected the request because the prompt exceeds its context.
struct PromptTooLongError : BackendError {
  explicit PromptTooLongError(const std::string& msg) : BackendError(msg) {}
};

// A scoring-time invariant broke (length mismatch and the like). CLI exit 1.
struct EvalError : Error {
  explicit EvalError(const std::string& msg) : Error(msg) {}
};

}  // namespace xlit
