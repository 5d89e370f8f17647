#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "xlit/llm_client.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <thread>

#include "json.hpp"
#include "xlit/errors.hpp"

namespace xlit {

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw BackendError("SHA-256 computation failed");
  }
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

nlohmann::json request_summary(const CompletionRequest& request) {
  constexpr std::size_t kHeadBytes = 96;
  std::size_t head = std::min(request.prompt.size(), kHeadBytes);
  // Back up so the preview does not split a UTF-8 sequence.
  while (head > 0 && head < request.prompt.size() &&
         (static_cast<unsigned char>(request.prompt[head]) & 0xC0) == 0x80) {
    --head;
  }
  return {{"prompt_head", request.prompt.substr(0, head)},
          {"prompt_bytes", request.prompt.size()},
          {"max_new_tokens", request.max_new_tokens},
          {"temperature", request.temperature},
          {"stop_sequences", request.stop_sequences}};
}

bool mentions_context_overflow(const std::string& body) {
  std::string lower;
  lower.reserve(body.size());
  for (char c : body) {
    lower.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (const char* needle :
       {"context length", "context window", "maximum context",
        "too many tokens", "prompt is too long", "prompt too long"}) {
    if (lower.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

std::string request_hash(const CompletionRequest& request) {
  nlohmann::json j;
  j["max_new_tokens"] = request.max_new_tokens;
  j["prompt"] = request.prompt;
  j["stop_sequences"] = request.stop_sequences;
  j["temperature"] = request.temperature;
  return sha256_hex(j.dump());
}

// Counting semaphore. std::counting_semaphore needs a compile-time maximum,
// which max_concurrency is not, so this is the two-liner equivalent.
struct LiveBackend::Semaphore {
  explicit Semaphore(int count) : available(count) {}
  std::mutex m;
  std::condition_variable cv;
  int available;

  void acquire() {
    std::unique_lock lock(m);
    cv.wait(lock, [&] { return available > 0; });
    --available;
  }
  void release() {
    {
      std::lock_guard lock(m);
      ++available;
    }
    cv.notify_one();
  }
};

LiveBackend::LiveBackend(LiveBackendOptions options)
    : options_(std::move(options)) {
  const std::string& url = options_.url;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("backend URL missing scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  base_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (options_.max_attempts < 1) {
    throw ConfigError("max_attempts must be >= 1");
  }
  if (options_.max_concurrency < 1) {
    throw ConfigError("max_concurrency must be >= 1");
  }
  slots_ = std::make_shared<Semaphore>(options_.max_concurrency);
}

CompletionResult LiveBackend::complete(const CompletionRequest& request) {
  nlohmann::json body;
  body["prompt"] = request.prompt;
  body["max_tokens"] = request.max_new_tokens;
  body["temperature"] = request.temperature;
  if (!request.stop_sequences.empty()) body["stop"] = request.stop_sequences;
  if (!options_.model.empty()) body["model"] = options_.model;
  std::string payload = body.dump();

  httplib::Headers headers;
  if (const char* token = std::getenv(options_.auth_env.c_str());
      token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  slots_->acquire();
  struct Release {
    Semaphore* s;
    ~Release() { s->release(); }
  } release{slots_.get()};

  std::string last_error;
  auto start = std::chrono::steady_clock::now();
  for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(
          options_.backoff_initial_ms << (attempt - 1)));
    }
    httplib::Client client(base_);
    client.set_connection_timeout(options_.timeout_s, 0);
    client.set_read_timeout(options_.timeout_s, 0);
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("malformed backend response: ") +
                           e.what());
      }
      if (!reply.contains("choices") || reply["choices"].empty() ||
          !reply["choices"][0].contains("text")) {
        throw BackendError("backend response has no choices[0].text");
      }
      CompletionResult result;
      result.text = reply["choices"][0]["text"].get<std::string>();
      result.backend_id = id();
      result.latency_ms = static_cast<long>(
          std::chrono::duration_cast<std::chrono::milliseconds>(
              std::chrono::steady_clock::now() - start)
              .count());
      return result;
    }
    if (res->status == 400 && mentions_context_overflow(res->body)) {
      throw PromptTooLongError("prompt exceeds the backend context window: " +
                               res->body.substr(0, 200));
    }
    bool transient =
        res->status == 408 || res->status == 429 || res->status >= 500;
    if (!transient) {
      throw BackendError("backend returned HTTP " +
                         std::to_string(res->status) + ": " +
                         res->body.substr(0, 200));
    }
    last_error = "HTTP " + std::to_string(res->status);
  }
  throw BackendError("backend unreachable after " +
                     std::to_string(options_.max_attempts) +
                     " attempts (last error: " + last_error + ")");
}

ReplayBackend::ReplayBackend(std::filesystem::path cassette)
    : cassette_(std::move(cassette)), by_hash_(load_cassette(cassette_)) {}

std::string ReplayBackend::id() const {
  return "replay:" + cassette_.string();
}

CompletionResult ReplayBackend::complete(const CompletionRequest& request) {
  std::string hash = request_hash(request);
  auto it = by_hash_.find(hash);
  if (it == by_hash_.end()) {
    throw ReplayMissError(
        "cassette " + cassette_.string() + " has no entry for request " + hash,
        hash);
  }
  CompletionResult result;
  result.text = it->second;
  result.backend_id = id();
  result.from_cache = true;
  return result;
}

RecordingBackend::RecordingBackend(std::unique_ptr<CompletionBackend> inner,
                                   std::filesystem::path cassette)
    : inner_(std::move(inner)), cassette_(std::move(cassette)) {
  if (std::filesystem::exists(cassette_)) {
    by_hash_ = load_cassette(cassette_);
  }
  out_.open(cassette_, std::ios::binary | std::ios::app);
  if (!out_) throw ConfigError("cannot write cassette " + cassette_.string());
}

CompletionResult RecordingBackend::complete(const CompletionRequest& request) {
  std::string hash = request_hash(request);
  {
    std::lock_guard lock(mutex_);
    auto it = by_hash_.find(hash);
    if (it != by_hash_.end()) {
      CompletionResult result;
      result.text = it->second;
      result.backend_id = id();
      result.from_cache = true;
      return result;
    }
  }
  CompletionResult result = inner_->complete(request);
  std::lock_guard lock(mutex_);
  if (by_hash_.emplace(hash, result.text).second) {
    out_ << cassette_line(hash, request, result.text) << '\n';
    out_.flush();
  }
  return result;
}

std::map<std::string, std::string> load_cassette(
    const std::filesystem::path& cassette) {
  std::ifstream in(cassette, std::ios::binary);
  if (!in) throw ConfigError("cannot open cassette " + cassette.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(cassette.string() + ":" + std::to_string(lineno) +
                        ": bad cassette line: " + e.what());
    }
    if (!j.contains("hash") || !j.contains("text")) {
      throw ConfigError(cassette.string() + ":" + std::to_string(lineno) +
                        ": cassette line needs 'hash' and 'text'");
    }
    std::string hash = j["hash"].get<std::string>();
    if (!out.emplace(hash, j["text"].get<std::string>()).second) {
      throw ConfigError(cassette.string() + ":" + std::to_string(lineno) +
                        ": duplicate hash " + hash);
    }
  }
  return out;
}

std::string cassette_line(const std::string& hash,
                          const CompletionRequest& request,
                          const std::string& text) {
  nlohmann::json j;
  j["hash"] = hash;
  j["request"] = request_summary(request);
  j["text"] = text;
  return j.dump();
}

std::unique_ptr<CompletionBackend> make_backend(const std::string& spec) {
  if (spec.rfind("live:", 0) == 0) {
    LiveBackendOptions options;
    options.url = spec.substr(5);
    if (options.url.empty()) throw ConfigError("empty live backend URL");
    return std::make_unique<LiveBackend>(std::move(options));
  }
  if (spec.rfind("replay:", 0) == 0) {
    std::string file = spec.substr(7);
    if (file.empty()) throw ConfigError("empty replay cassette path");
    return std::make_unique<ReplayBackend>(file);
  }
  throw ConfigError("backend spec must be live:<url> or replay:<file>, got '" +
                    spec + "'");
}

}  // namespace xlit
