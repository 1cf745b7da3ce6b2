#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "crclean/jsonl.hpp"

namespace crclean::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CRCLEAN_FIXTURE_DIR) / name;
}

inline std::filesystem::path share_file(const std::string& name) {
  return std::filesystem::path(CRCLEAN_SHARE_DIR) / name;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "crclean") {
    std::random_device rd;
    for (int i = 0; i < 100; ++i) {
      auto p = std::filesystem::temp_directory_path() / (tag + "-" + std::to_string(rd()));
      if (std::filesystem::create_directory(p)) {
        path_ = p;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) { return jsonl::read_file(p); }

inline void write_text(const std::filesystem::path& p, const std::string& s) { jsonl::write_file_atomic(p, s); }

}  // namespace crclean::testing
