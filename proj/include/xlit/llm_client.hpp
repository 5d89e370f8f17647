#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace xlit {

struct CompletionRequest {
  std::string prompt;
  int max_new_tokens = 16;
  // Greedy by default: evaluation runs must be deterministic.
  double temperature = 0.0;
  std::vector<std::string> stop_sequences;
};

struct CompletionResult {
  // The continuation only, prompt excluded.
  std::string text;
  std::string backend_id;
  long latency_ms = 0;
  bool from_cache = false;
};

// Hex SHA-256 over the request's canonical serialization: a compact JSON
// object with keys in alphabetical order (max_new_tokens, prompt,
// stop_sequences, temperature), UTF-8 throughout. Equal requests hash
// equally on every platform, which makes cassettes portable.
std::string request_hash(const CompletionRequest& request);

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;

  // Safe to call from several threads at once. Throws BackendError or a
  // subclass on failure.
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
  virtual std::string id() const = 0;
};

struct LiveBackendOptions {
  // Full endpoint URL, e.g. "http://localhost:8000/v1/completions".
  std::string url;
  // Optional model name copied into the request body.
  std::string model;
  // Environment variable read for a bearer token; unset means no auth.
  std::string auth_env = "XLIT_API_KEY";
  int max_attempts = 3;
  int backoff_initial_ms = 250;
  int max_concurrency = 4;
  int timeout_s = 120;
};

// POSTs OpenAI-style completion requests. Transient failures (connection
// errors, HTTP 408/429/5xx) are retried with exponential backoff up to
// max_attempts; at most max_concurrency requests are in flight at once. A
// 400 response whose body mentions the context window raises
// PromptTooLongError.
class LiveBackend : public CompletionBackend {
 public:
  explicit LiveBackend(LiveBackendOptions options);
  CompletionResult complete(const CompletionRequest& request) override;
  std::string id() const override { return "live:" + options_.url; }

 private:
  struct Semaphore;
  LiveBackendOptions options_;
  std::string base_;
  std::string path_;
  std::shared_ptr<Semaphore> slots_;
};

// Serves completions from a cassette written earlier; never touches the
// network. A request absent from the cassette raises ReplayMissError
// carrying the request hash.
class ReplayBackend : public CompletionBackend {
 public:
  explicit ReplayBackend(std::filesystem::path cassette);
  CompletionResult complete(const CompletionRequest& request) override;
  std::string id() const override;

 private:
  std::filesystem::path cassette_;
  std::map<std::string, std::string> by_hash_;
};

// Wraps another backend and appends every new (hash, response) pair to a
// cassette; requests already recorded are answered from the cassette
// without reaching the inner backend. Appends are serialized.
class RecordingBackend : public CompletionBackend {
 public:
  RecordingBackend(std::unique_ptr<CompletionBackend> inner,
                   std::filesystem::path cassette);
  CompletionResult complete(const CompletionRequest& request) override;
  std::string id() const override { return inner_->id(); }

 private:
  std::unique_ptr<CompletionBackend> inner_;
  std::filesystem::path cassette_;
  std::mutex mutex_;
  std::map<std::string, std::string> by_hash_;
  std::ofstream out_;
};

// Loads a JSON-lines cassette into hash -> completion text. Each line must
// carry at least "hash" and "text"; other keys (the request summary) are
// informational. Throws ConfigError citing the offending line.
std::map<std::string, std::string> load_cassette(
    const std::filesystem::path& cassette);

// One cassette line: hash, a short request summary, and the response text.
std::string cassette_line(const std::string& hash,
                          const CompletionRequest& request,
                          const std::string& text);

// "live:<url>" or "replay:<file>". Throws ConfigError on anything else.
std::unique_ptr<CompletionBackend> make_backend(const std::string& spec);

}  // namespace xlit
