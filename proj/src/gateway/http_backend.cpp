#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <ostream>

#include "crclean/error.hpp"
#include "crclean/gateway.hpp"

namespace crclean {
namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string base;    // path prefix without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint must include a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = url.substr(0, path_start);
  e.base = path_start == std::string::npos ? std::string{} : url.substr(path_start);
  while (!e.base.empty() && e.base.back() == '/') e.base.pop_back();
  return e;
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

struct HttpBackend::Impl {
  Options options;
  Endpoint endpoint;
  std::mutex trace_mutex;

  Json post(const std::string& route, const Json& body) {
    const std::string path = endpoint.base + route;
    const std::string payload = body.dump();
    if (options.trace) {
      std::lock_guard lock(trace_mutex);
      *options.trace << "> POST " << endpoint.origin << path << "\n"
                     << "> Authorization: " << (options.api_key.empty() ? "(none)" : "Bearer ***") << "\n"
                     << "> " << payload << "\n";
    }

    // httplib clients are not thread-safe; one per request keeps concurrent
    // callers independent.
    httplib::Client client(endpoint.origin);
    const auto secs = static_cast<time_t>(options.timeout.count());
    client.set_connection_timeout(secs, 0);
    client.set_read_timeout(secs, 0);
    client.set_write_timeout(secs, 0);
    httplib::Headers headers;
    if (!options.api_key.empty()) headers.emplace("Authorization", "Bearer " + options.api_key);

    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      throw TransportError("POST " + path + ": " + httplib::to_string(res.error()), 0, true);
    }
    if (options.trace) {
      std::lock_guard lock(trace_mutex);
      *options.trace << "< " << res->status << "\n< " << res->body << "\n";
    }
    if (res->status < 200 || res->status >= 300) {
      throw TransportError("POST " + path + ": HTTP " + std::to_string(res->status), res->status,
                           retryable_status(res->status));
    }
    try {
      return Json::parse(res->body);
    } catch (const Json::exception& e) {
      throw TransportError("POST " + path + ": response is not JSON: " + e.what(), res->status, true);
    }
  }
};

HttpBackend::HttpBackend(Options options) : impl_(std::make_unique<Impl>()) {
  impl_->endpoint = split_endpoint(options.endpoint);
  impl_->options = std::move(options);
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::complete(const ChatRequest& request) {
  Json body{{"model", request.model},
            {"messages", Json::array({Json{{"role", "system"}, {"content", request.system}},
                                      Json{{"role", "user"}, {"content", request.user}}})},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
  Json res = impl_->post("/chat/completions", body);
  try {
    const auto& content = res.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string{} : content.get<std::string>();
  } catch (const Json::exception& e) {
    throw TransportError(std::string("chat response missing choices[0].message.content: ") + e.what(), 200, true);
  }
}

std::vector<std::vector<double>> HttpBackend::embed(const std::string& model, const std::vector<std::string>& texts) {
  Json res = impl_->post("/embeddings", Json{{"model", model}, {"input", texts}});
  try {
    std::vector<std::pair<std::size_t, std::vector<double>>> rows;
    for (const auto& item : res.at("data")) {
      rows.emplace_back(item.value("index", rows.size()), item.at("embedding").get<std::vector<double>>());
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (auto& r : rows) out.push_back(std::move(r.second));
    return out;
  } catch (const Json::exception& e) {
    throw TransportError(std::string("embedding response malformed: ") + e.what(), 200, true);
  }
}

}  // namespace crclean
