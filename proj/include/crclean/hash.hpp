#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace crclean {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Lowercase hex SHA-256 of a file's contents. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

/// 64-bit FNV-1a. Stable across platforms; used where a cheap bucket hash is enough.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace crclean
