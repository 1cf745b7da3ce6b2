#include <cstdio>
#include <sstream>

#include "crclean/error.hpp"
#include "crclean/gateway.hpp"
#include "crclean/hash.hpp"
#include "crclean/jsonl.hpp"
#include "crclean/text.hpp"

namespace crclean {

ResponseCache::ResponseCache(std::filesystem::path log_path) : path_(std::move(log_path)) {
  if (std::filesystem::exists(*path_)) {
    const std::string contents = jsonl::read_file(*path_);
    const auto lines = text::split_lines(contents);
    const bool torn_tail = !contents.empty() && contents.back() != '\n';
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (text::trim(lines[i]).empty()) continue;
      try {
        Json rec = Json::parse(lines[i]);
        entries_[rec.at("key").get<std::string>()] = rec.at("value").get<std::string>();
      } catch (const Json::exception& e) {
        if (torn_tail && i + 1 == lines.size()) break;
        throw IoError("cache log " + path_->string() + ":" + std::to_string(i + 1) + ": " + e.what());
      }
    }
    if (torn_tail) {
      // Drop the partial record so the next append starts on a fresh line.
      std::string kept = contents.substr(0, contents.rfind('\n') == std::string::npos ? 0 : contents.rfind('\n') + 1);
      jsonl::write_file_atomic(*path_, kept);
    }
  } else if (path_->has_parent_path()) {
    std::filesystem::create_directories(path_->parent_path());
  }
  log_.open(*path_, std::ios::binary | std::ios::app);
  if (!log_) throw IoError("cannot open cache log " + path_->string());
}

std::optional<std::string> ResponseCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::store(const std::string& key, const std::string& value) {
  std::lock_guard lock(mutex_);
  entries_[key] = value;
  if (path_) {
    log_ << jsonl::dump_line(Json{{"key", key}, {"value", value}});
    log_.flush();
    if (!log_) throw IoError("cache log append failed: " + path_->string());
  }
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

std::string format_temperature(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

}  // namespace

std::string chat_cache_key(const ChatRequest& r) {
  std::string material = "chat";
  for (const std::string* part : {&r.model, &r.system, &r.user}) {
    material += '\0';
    material += *part;
  }
  material += '\0';
  material += format_temperature(r.temperature);
  return sha256_hex(material);
}

std::string embedding_cache_key(const std::string& model, const std::string& text) {
  std::string material = "embed";
  material += '\0';
  material += model;
  material += '\0';
  material += text;
  return sha256_hex(material);
}

}  // namespace crclean
