#include "crclean/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "crclean/error.hpp"
#include "crclean/text.hpp"

namespace crclean::jsonl {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string dump_line(const Json& record) {
  std::string s = record.dump();
  s += '\n';
  return s;
}

std::vector<Json> read_records(const std::filesystem::path& path) {
  const std::string contents = read_file(path);
  std::vector<Json> out;
  std::size_t lineno = 0;
  for (const auto& line : text::split_lines(contents)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_records(const std::filesystem::path& path, const std::vector<Json>& records) {
  std::string buf;
  for (const auto& r : records) buf += dump_line(r);
  write_file_atomic(path, buf);
}

}  // namespace crclean::jsonl
