#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crclean/corpus.hpp"
#include "crclean/prompting.hpp"

namespace crclean {

struct RetryPolicy {
  unsigned max_attempts = 5;
  std::chrono::milliseconds backoff_base{1000};
};

struct ModelConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo-0125";
  double temperature = 0.1;
  unsigned max_tokens = 64;
  std::chrono::seconds timeout{60};
  RetryPolicy retry;
  /// Environment variable holding the API key.
  std::string api_key_env = "LLM_API_KEY";

  void validate() const;  // throws ConfigError
};

struct ChatRequest {
  std::string model;
  std::string system;
  std::string user;
  double temperature = 0.1;
  unsigned max_tokens = 64;
};

/// Something that answers chat and embedding requests. Implementations throw
/// TransportError for failures the caller may retry.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
  virtual std::vector<std::vector<double>> embed(const std::string& model, const std::vector<std::string>& texts) = 0;
};

/// OpenAI-compatible HTTP client: POST {endpoint}/chat/completions and
/// {endpoint}/embeddings.
class HttpBackend final : public Backend {
 public:
  struct Options {
    std::string endpoint;
    std::string api_key;  // empty: no Authorization header
    std::chrono::seconds timeout{60};
    std::ostream* trace = nullptr;  // request/response bodies, key redacted
  };
  explicit HttpBackend(Options options);
  ~HttpBackend() override;

  std::string complete(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed(const std::string& model, const std::vector<std::string>& texts) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Deterministic stand-in: the first rule whose substring occurs in the user
/// prompt decides the response, otherwise `default_response`. Embeddings
/// come from signed feature hashing of lowercase word tokens.
class MockBackend final : public Backend {
 public:
  struct Rule {
    std::string match;
    std::string response;
  };

  MockBackend(std::vector<Rule> rules, std::string default_response, std::size_t embedding_dim = 256);
  /// {"rules": [{"match": ..., "response": ...}], "default": ..., "embedding_dim": N}
  static std::shared_ptr<MockBackend> from_file(const std::filesystem::path& path);

  std::string complete(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed(const std::string& model, const std::vector<std::string>& texts) override;

  std::size_t chat_calls() const noexcept { return chat_calls_.load(); }
  std::size_t embed_calls() const noexcept { return embed_calls_.load(); }

 private:
  std::vector<Rule> rules_;
  std::string default_response_;
  std::size_t dim_;
  std::atomic<std::size_t> chat_calls_{0};
  std::atomic<std::size_t> embed_calls_{0};
};

std::vector<double> hashing_embedding(std::string_view text, std::size_t dim);

/// Key/value store for raw responses. With a path, every store is appended
/// to a JSON-lines log that is replayed on construction; a torn final line
/// from a crash is ignored.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path log_path);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& value);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::string> entries_;
  std::optional<std::filesystem::path> path_;
  std::ofstream log_;
};

std::string chat_cache_key(const ChatRequest& request);
std::string embedding_cache_key(const std::string& model, const std::string& text);

struct Prediction {
  std::string id;
  std::optional<Label> label;  // nullopt marks a response that never parsed
  std::string error;
  std::string raw_response;
  std::string model;
  std::string prompt_variant;
  std::string prompt_fingerprint;
  unsigned attempts = 0;
  std::chrono::milliseconds latency{0};
  bool from_cache = false;

  bool is_error() const noexcept { return !label.has_value(); }
};

/// Persistent form. Attempts, latency and cache provenance are run-dependent
/// and are not serialized.
Json to_json(const Prediction& p);
Prediction prediction_from_json(const Json& j);  // throws Error
void write_predictions(const std::filesystem::path& path, const std::vector<Prediction>& predictions);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

class Gateway {
 public:
  struct Options {
    std::function<void(std::chrono::milliseconds)> sleep;  // default: this_thread::sleep_for
    std::ostream* log = nullptr;                            // retry diagnostics
    std::uint64_t jitter_seed = 0x5eed;
  };

  Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache);
  Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache, Options options);

  /// One classification. Cache hits issue no request. Unparsable responses
  /// are retried up to the attempt budget and then returned error-marked.
  /// Throws TransportError once retries are exhausted.
  Prediction classify_one(const ReviewInstance& instance, const PromptConfig& prompt, const ModelConfig& model);

  /// One prediction per instance, in input order. Each completed prediction
  /// is appended to `checkpoint` before the next is started; ids already in
  /// the checkpoint are not requested again. Throws CheckpointCorrupt.
  std::vector<Prediction> classify_batch(const Dataset& dataset, const PromptConfig& prompt,
                                         const ModelConfig& model, unsigned parallelism,
                                         const std::filesystem::path& checkpoint);

  /// Unit-normalized embeddings, one per text, cached per (model, text).
  std::vector<std::vector<double>> embed_texts(const std::vector<std::string>& texts, const ModelConfig& model);

  /// Requests that reached the backend.
  std::size_t backend_calls() const noexcept { return backend_calls_.load(); }
  std::size_t cache_hits() const noexcept { return cache_hits_.load(); }

 private:
  template <typename Fn>
  auto with_transport_retry(const ModelConfig& model, unsigned& attempts, Fn&& call);
  std::mutex& key_lock(const std::string& key);
  std::chrono::milliseconds backoff(const RetryPolicy& policy, unsigned attempt);

  std::shared_ptr<Backend> backend_;
  std::shared_ptr<ResponseCache> cache_;
  Options options_;
  std::array<std::mutex, 64> key_locks_;
  std::mutex jitter_mutex_;
  std::uint64_t jitter_state_;
  std::atomic<std::size_t> backend_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

/// Stable identity of a classification run, stored in checkpoint headers.
std::string run_fingerprint(const PromptConfig& prompt, const ModelConfig& model);

}  // namespace crclean
