#include <cstdlib>

#include "crclean/config.hpp"
#include "crclean/error.hpp"

namespace crclean {
namespace {

void interpolate_tree(Json& j, const EnvLookup& env) {
  if (j.is_string()) {
    j = interpolate_env(j.get<std::string>(), env);
  } else if (j.is_structured()) {
    for (auto& v : j) interpolate_tree(v, env);
  }
}

void check_keys(const Json& obj, const std::string& where, std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const Json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

std::string interpolate_env(std::string_view text, const EnvLookup& env) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text.compare(i, 3, "$${") == 0) {
      out += "${";
      i += 3;
    } else if (text.compare(i, 2, "${") == 0) {
      const auto close = text.find('}', i + 2);
      if (close == std::string_view::npos) throw ConfigError("unterminated ${ in config value");
      const std::string name(text.substr(i + 2, close - i - 2));
      auto value = env(name);
      if (!value) throw ConfigError("environment variable " + name + " is not set");
      out += *value;
      i = close + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

RunConfig config_from_json(const Json& doc, const std::filesystem::path& base_dir, const EnvLookup& env) {
  Json j = doc;
  interpolate_tree(j, env);
  check_keys(j, "config", {"fields", "prompt", "model", "embedding", "cache", "seed", "parallelism"});

  RunConfig c;
  c.raw = doc;

  if (j.contains("fields")) {
    const auto& f = j["fields"];
    check_keys(f, "fields", {"id", "patch", "comment", "lang", "split", "label"});
    c.fields.id = get(f, "id", "fields", c.fields.id);
    c.fields.patch = get(f, "patch", "fields", c.fields.patch);
    c.fields.comment = get(f, "comment", "fields", c.fields.comment);
    c.fields.lang = get(f, "lang", "fields", c.fields.lang);
    c.fields.split = get(f, "split", "fields", c.fields.split);
    c.fields.label = get(f, "label", "fields", c.fields.label);
  }

  if (j.contains("prompt")) {
    const auto& p = j["prompt"];
    check_keys(p, "prompt", {"variant", "input", "templates_dir", "rules_file", "diff_token_budget"});
    if (p.contains("variant")) c.prompt.variant = parse_instruction_variant(get(p, "variant", "prompt", std::string()));
    if (p.contains("input")) c.prompt.input_mode = parse_input_mode(get(p, "input", "prompt", std::string()));
    const auto dir = get(p, "templates_dir", "prompt", std::string());
    if (!dir.empty()) {
      const auto path = resolve(base_dir, dir);
      if (!std::filesystem::is_directory(path)) throw ConfigError("templates_dir " + path.string() + " not found");
      c.prompt.templates = PromptTemplates::from_directory(path);
    }
    const auto rules = get(p, "rules_file", "prompt", std::string());
    if (!rules.empty()) {
      const auto path = resolve(base_dir, rules);
      if (!std::filesystem::is_regular_file(path)) throw ConfigError("rules_file " + path.string() + " not found");
      c.prompt.auxiliary_rules = load_rules_file(path);
    }
    c.prompt.diff_token_budget = get(p, "diff_token_budget", "prompt", c.prompt.diff_token_budget);
  }

  if (j.contains("model")) {
    const auto& m = j["model"];
    check_keys(m, "model",
               {"backend", "endpoint", "name", "temperature", "max_tokens", "timeout_s", "max_attempts",
                "backoff_ms", "api_key_env", "mock_rules"});
    const auto backend = get(m, "backend", "model", std::string("http"));
    if (backend == "http") c.backend = BackendKind::http;
    else if (backend == "mock") c.backend = BackendKind::mock;
    else throw ConfigError("model.backend must be \"http\" or \"mock\"");
    c.model.endpoint = get(m, "endpoint", "model", c.model.endpoint);
    c.model.model = get(m, "name", "model", c.model.model);
    c.model.temperature = get(m, "temperature", "model", c.model.temperature);
    c.model.max_tokens = get(m, "max_tokens", "model", c.model.max_tokens);
    c.model.timeout = std::chrono::seconds(get<long>(m, "timeout_s", "model", c.model.timeout.count()));
    c.model.retry.max_attempts = get(m, "max_attempts", "model", c.model.retry.max_attempts);
    c.model.retry.backoff_base =
        std::chrono::milliseconds(get<long>(m, "backoff_ms", "model", c.model.retry.backoff_base.count()));
    c.model.api_key_env = get(m, "api_key_env", "model", c.model.api_key_env);
    c.mock_rules = resolve(base_dir, get(m, "mock_rules", "model", std::string()));
    if (c.backend == BackendKind::mock && c.mock_rules.empty()) {
      throw ConfigError("model.mock_rules is required for the mock backend");
    }
  }

  if (j.contains("embedding")) {
    check_keys(j["embedding"], "embedding", {"model"});
    c.embedding_model = get(j["embedding"], "model", "embedding", c.embedding_model);
  }
  c.cache_path = resolve(base_dir, get(j, "cache", "config", std::string()));
  c.seed = get(j, "seed", "config", c.seed);
  c.parallelism = get(j, "parallelism", "config", c.parallelism);

  c.prompt.validate();
  c.model.validate();
  if (c.parallelism == 0) throw ConfigError("parallelism must be at least 1");
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const EnvLookup& env) {
  Json doc;
  try {
    doc = Json::parse(jsonl::read_file(path));
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(doc, path.parent_path(), env);
}

}  // namespace crclean
