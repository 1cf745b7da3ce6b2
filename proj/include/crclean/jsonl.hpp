#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace crclean {

using Json = nlohmann::json;

namespace jsonl {

/// Reads a whole file. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames, so readers never see a
/// half-written artifact. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// One compact JSON document per line, sorted keys, '\n' terminated.
std::string dump_line(const Json& record);

/// Parses every non-blank line; throws IoError naming path and line on failure.
std::vector<Json> read_records(const std::filesystem::path& path);

void write_records(const std::filesystem::path& path, const std::vector<Json>& records);

}  // namespace jsonl
}  // namespace crclean
