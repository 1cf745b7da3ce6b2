#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "crclean/jsonl.hpp"

namespace crclean {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Provenance written next to a command's artifacts as
/// `<out>/<command>.manifest.json`. Inputs are recorded by path and SHA-256,
/// outputs by file name and SHA-256; nothing time-dependent is stored so a
/// rerun with the same inputs reproduces the manifest byte for byte. Inputs
/// inside the output directory are recorded relative to it, so the same run
/// into another directory yields the same manifest.
struct Manifest {
  std::string command;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  Json config = Json::object();
  std::uint64_t seed = 0;
  Json parameters = Json::object();
};

Json to_json(const Manifest& m, const std::filesystem::path& out_dir = {});
std::filesystem::path write_manifest(const std::filesystem::path& out_dir, const Manifest& m);

}  // namespace crclean
