#include <cmath>
#include <ostream>
#include <thread>

#include "crclean/error.hpp"
#include "crclean/gateway.hpp"
#include "crclean/hash.hpp"

namespace crclean {

void ModelConfig::validate() const {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
  if (model.empty()) throw ConfigError("model id is empty");
  if (max_tokens == 0) throw ConfigError("max_tokens must be positive");
}

std::string run_fingerprint(const PromptConfig& prompt, const ModelConfig& model) {
  Json j{{"variant", std::string(to_string(prompt.variant))},
         {"input_mode", std::string(to_string(prompt.input_mode))},
         {"rules", prompt.variant == InstructionVariant::auxiliary ? Json(prompt.auxiliary_rules) : Json::array()},
         {"budget", prompt.diff_token_budget},
         {"system", prompt.templates.system},
         {"definitions", prompt.templates.definitions},
         {"user", prompt.input_mode == InputMode::comment_only ? prompt.templates.user_comment_only
                                                              : prompt.templates.user_comment_plus_diff},
         {"model", model.model},
         {"temperature", model.temperature},
         {"max_tokens", model.max_tokens}};
  return sha256_hex(j.dump()).substr(0, 16);
}

Gateway::Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache)
    : Gateway(std::move(backend), std::move(cache), Options{}) {}

Gateway::Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache, Options options)
    : backend_(std::move(backend)), cache_(std::move(cache)), options_(std::move(options)),
      jitter_state_(options_.jitter_seed) {
  if (!backend_) throw InvalidArgument("gateway needs a backend");
  if (!cache_) cache_ = std::make_shared<ResponseCache>();
  if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::mutex& Gateway::key_lock(const std::string& key) {
  return key_locks_[fnv1a64(key) % key_locks_.size()];
}

std::chrono::milliseconds Gateway::backoff(const RetryPolicy& policy, unsigned attempt) {
  double unit;
  {
    std::lock_guard lock(jitter_mutex_);
    // splitmix64
    std::uint64_t z = (jitter_state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    unit = static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  const double factor = std::ldexp(1.0, static_cast<int>(attempt) - 1) * (0.5 + unit);
  return std::chrono::milliseconds(static_cast<long long>(static_cast<double>(policy.backoff_base.count()) * factor));
}

// Runs `call` until it returns, spending one attempt per try. Retryable
// transport failures back off; the rest propagate immediately.
template <typename Fn>
auto Gateway::with_transport_retry(const ModelConfig& model, unsigned& attempts, Fn&& call) {
  while (true) {
    ++attempts;
    try {
      ++backend_calls_;
      return call();
    } catch (const TransportError& e) {
      if (!e.retryable() || attempts >= model.retry.max_attempts) throw;
      auto delay = backoff(model.retry, attempts);
      if (options_.log) *options_.log << "transport error (" << e.what() << "), retry in " << delay.count() << " ms\n";
      options_.sleep(delay);
    }
  }
}

Prediction Gateway::classify_one(const ReviewInstance& instance, const PromptConfig& prompt,
                                 const ModelConfig& model) {
  model.validate();
  const RenderedPrompt rendered = render_prompt(instance, prompt);
  ChatRequest request{model.model, rendered.system_text, rendered.user_text, model.temperature, model.max_tokens};
  const std::string key = chat_cache_key(request);

  Prediction p;
  p.id = instance.id;
  p.model = model.model;
  p.prompt_variant = prompt.variant_tag();
  p.prompt_fingerprint = rendered.fingerprint;

  const auto started = std::chrono::steady_clock::now();
  auto finish = [&]() {
    p.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    return p;
  };

  // Serializes identical prompts so concurrent duplicates cost one request.
  std::lock_guard guard(key_lock(key));

  if (auto cached = cache_->lookup(key)) {
    try {
      p.label = parse_label_response(*cached);
      p.raw_response = *cached;
      p.from_cache = true;
      ++cache_hits_;
      return finish();
    } catch (const Error&) {
      // Entry written by something else; ask again.
    }
  }

  unsigned attempts = 0;
  while (attempts < model.retry.max_attempts) {
    std::string raw = with_transport_retry(model, attempts, [&] { return backend_->complete(request); });
    p.raw_response = raw;
    p.attempts = attempts;
    try {
      p.label = parse_label_response(raw);
      p.error.clear();
      cache_->store(key, raw);
      return finish();
    } catch (const UnparsableResponse& e) {
      p.error = std::string("unparsable response: ") + e.what();
    } catch (const AmbiguousResponse& e) {
      p.error = std::string("ambiguous response: ") + e.what();
    }
    if (options_.log) *options_.log << instance.id << ": " << p.error << " (attempt " << attempts << ")\n";
  }
  p.label.reset();
  return finish();
}

std::vector<std::vector<double>> Gateway::embed_texts(const std::vector<std::string>& texts, const ModelConfig& model) {
  if (texts.empty()) throw InvalidArgument("embed_texts needs at least one text");
  model.validate();

  std::vector<std::optional<std::vector<double>>> raw(texts.size());
  std::vector<std::string> missing;
  std::unordered_map<std::string, std::vector<std::size_t>> missing_slots;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto key = embedding_cache_key(model.model, texts[i]);
    if (auto hit = cache_->lookup(key)) {
      raw[i] = Json::parse(*hit).get<std::vector<double>>();
      ++cache_hits_;
    } else {
      auto& slots = missing_slots[texts[i]];
      if (slots.empty()) missing.push_back(texts[i]);
      slots.push_back(i);
    }
  }

  if (!missing.empty()) {
    unsigned attempts = 0;
    auto fresh = with_transport_retry(model, attempts, [&] { return backend_->embed(model.model, missing); });
    if (fresh.size() != missing.size()) {
      throw DimensionMismatch("backend returned " + std::to_string(fresh.size()) + " embeddings for " +
                              std::to_string(missing.size()) + " texts");
    }
    for (std::size_t j = 0; j < missing.size(); ++j) {
      cache_->store(embedding_cache_key(model.model, missing[j]), Json(fresh[j]).dump());
      for (auto slot : missing_slots[missing[j]]) raw[slot] = fresh[j];
    }
  }

  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  const std::size_t dim = raw.front()->size();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto v = std::move(*raw[i]);
    if (v.size() != dim || dim == 0) {
      throw DimensionMismatch("embedding " + std::to_string(i) + " has dimension " + std::to_string(v.size()) +
                              ", expected " + std::to_string(dim));
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DimensionMismatch("embedding " + std::to_string(i) + " has zero or non-finite norm");
    }
    for (double& x : v) x /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace crclean
