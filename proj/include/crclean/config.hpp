#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "crclean/corpus.hpp"
#include "crclean/gateway.hpp"
#include "crclean/prompting.hpp"

namespace crclean {

enum class BackendKind { http, mock };

struct RunConfig {
  FieldMapping fields;
  PromptConfig prompt;
  ModelConfig model;
  BackendKind backend = BackendKind::http;
  std::filesystem::path mock_rules;      // required for the mock backend
  std::string embedding_model = "text-embedding-3-small";
  std::filesystem::path cache_path;      // empty: <out>/responses.cache.jsonl
  std::uint64_t seed = 1;
  unsigned parallelism = 4;
  std::filesystem::path out_dir = ".";
  bool trace = false;
  /// The config document as written (before ${VAR} interpolation, so no
  /// secrets), kept for manifests.
  Json raw = Json::object();
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
std::optional<std::string> process_env(const std::string& name);

/// Replaces ${NAME} with the variable's value; "$${" is a literal "${".
/// Throws ConfigError for unset variables or an unterminated reference.
std::string interpolate_env(std::string_view text, const EnvLookup& env = process_env);

/// Builds a config from a JSON document. Relative paths resolve against
/// `base_dir`. Throws ConfigError.
RunConfig config_from_json(const Json& doc, const std::filesystem::path& base_dir,
                           const EnvLookup& env = process_env);
RunConfig load_config(const std::filesystem::path& path, const EnvLookup& env = process_env);

}  // namespace crclean
