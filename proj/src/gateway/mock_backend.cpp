#include <algorithm>

#include "crclean/error.hpp"
#include "crclean/gateway.hpp"
#include "crclean/hash.hpp"
#include "crclean/jsonl.hpp"
#include "crclean/text.hpp"

namespace crclean {

MockBackend::MockBackend(std::vector<Rule> rules, std::string default_response, std::size_t embedding_dim)
    : rules_(std::move(rules)), default_response_(std::move(default_response)), dim_(embedding_dim) {
  if (dim_ == 0) throw ConfigError("mock embedding dimension must be positive");
}

std::shared_ptr<MockBackend> MockBackend::from_file(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(jsonl::read_file(path));
  } catch (const Json::exception& e) {
    throw ConfigError("mock rules " + path.string() + ": " + e.what());
  }
  std::vector<Rule> rules;
  try {
    for (const auto& r : j.value("rules", Json::array())) {
      rules.push_back({r.at("match").get<std::string>(), r.at("response").get<std::string>()});
    }
    return std::make_shared<MockBackend>(std::move(rules), j.value("default", std::string("Label: valid")),
                                         j.value("embedding_dim", std::size_t{256}));
  } catch (const Json::exception& e) {
    throw ConfigError("mock rules " + path.string() + ": " + e.what());
  }
}

std::string MockBackend::complete(const ChatRequest& request) {
  ++chat_calls_;
  for (const auto& rule : rules_) {
    if (request.user.find(rule.match) != std::string::npos) return rule.response;
  }
  return default_response_;
}

std::vector<double> hashing_embedding(std::string_view text, std::size_t dim) {
  std::vector<double> v(dim, 0.0);
  for (auto tok : text::approx_tokens(text)) {
    if (tok.size() == 1 && text::is_punct(tok.front())) continue;
    const auto h = fnv1a64(text::to_lower(tok));
    v[h % dim] += (h >> 63) ? -1.0 : 1.0;
  }
  // Empty text, or signs that cancelled out: fall back to a fixed direction.
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
  return v;
}

std::vector<std::vector<double>> MockBackend::embed(const std::string&, const std::vector<std::string>& texts) {
  ++embed_calls_;
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(hashing_embedding(t, dim_));
  return out;
}

}  // namespace crclean
