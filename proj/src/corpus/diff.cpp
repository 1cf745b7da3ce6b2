#include "crclean/diff.hpp"

#include <charconv>
#include <optional>

#include "crclean/error.hpp"
#include "crclean/text.hpp"

namespace crclean {

std::vector<std::string> Hunk::old_lines() const {
  std::vector<std::string> out;
  for (const auto& l : lines) {
    if (l.kind != LineKind::added) out.push_back(l.text);
  }
  return out;
}

std::vector<std::string> Hunk::new_lines() const {
  std::vector<std::string> out;
  for (const auto& l : lines) {
    if (l.kind != LineKind::removed) out.push_back(l.text);
  }
  return out;
}

namespace {

bool starts_with(std::string_view s, std::string_view prefix) noexcept {
  return s.substr(0, prefix.size()) == prefix;
}

bool is_file_header(std::string_view line) noexcept {
  static constexpr std::string_view kPrefixes[] = {
      "diff ", "index ", "--- ", "+++ ", "new file mode", "deleted file mode", "old mode", "new mode",
      "similarity index", "dissimilarity index", "rename from", "rename to", "copy from", "copy to",
      "Binary files"};
  for (auto p : kPrefixes) {
    if (starts_with(line, p)) return true;
  }
  return false;
}

// Parses "<start>[,<len>]" and advances `s` past it.
std::optional<std::pair<std::size_t, std::size_t>> parse_range(std::string_view& s) {
  std::size_t start = 0, len = 1;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), start);
  if (ec != std::errc{} || p == s.data()) return std::nullopt;
  s.remove_prefix(static_cast<std::size_t>(p - s.data()));
  if (!s.empty() && s.front() == ',') {
    s.remove_prefix(1);
    auto [q, ec2] = std::from_chars(s.data(), s.data() + s.size(), len);
    if (ec2 != std::errc{} || q == s.data()) return std::nullopt;
    s.remove_prefix(static_cast<std::size_t>(q - s.data()));
  }
  return std::pair{start, len};
}

Hunk parse_header(std::string_view line, std::size_t lineno) {
  std::string_view s = line;
  auto fail = [&](const char* why) { return DiffSyntax(lineno, std::string(why) + ": " + std::string(line)); };
  if (!starts_with(s, "@@ -")) throw fail("malformed hunk header");
  s.remove_prefix(4);
  auto old_range = parse_range(s);
  if (!old_range) throw fail("malformed old range");
  if (!starts_with(s, " +")) throw fail("malformed hunk header");
  s.remove_prefix(2);
  auto new_range = parse_range(s);
  if (!new_range) throw fail("malformed new range");
  if (!starts_with(s, " @@")) throw fail("unterminated hunk header");
  s.remove_prefix(3);
  Hunk h;
  h.old_start = old_range->first;
  h.old_len = old_range->second;
  h.new_start = new_range->first;
  h.new_len = new_range->second;
  h.section = std::string(s);
  return h;
}

struct Parsed {
  DiffPatch patch;
  std::vector<HunkSpan> spans;
};

Parsed parse_impl(std::string_view text) {
  Parsed out;
  std::size_t remaining_old = 0, remaining_new = 0;
  bool in_hunk = false;
  std::size_t file = 0;
  bool file_has_hunks = false;
  std::size_t last_old_start = 0;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    const std::size_t line_end = nl == std::string_view::npos ? text.size() : nl + 1;
    std::string_view line = text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++lineno;
    const std::size_t line_begin = pos;
    pos = line_end;

    if (in_hunk && remaining_old == 0 && remaining_new == 0) in_hunk = false;

    if (in_hunk) {
      if (starts_with(line, "\\")) {
        out.spans.back().end = line_end;
        continue;
      }
      Hunk& h = out.patch.hunks.back();
      const char marker = line.empty() ? ' ' : line.front();
      std::string body(line.empty() ? std::string_view{} : line.substr(1));
      switch (marker) {
        case ' ':
          if (remaining_old == 0 || remaining_new == 0) {
            throw DiffSyntax(lineno, "context line exceeds hunk header counts");
          }
          --remaining_old;
          --remaining_new;
          h.lines.push_back({LineKind::context, std::move(body)});
          break;
        case '-':
          if (remaining_old == 0) throw DiffSyntax(lineno, "more removed lines than the header declares");
          --remaining_old;
          h.lines.push_back({LineKind::removed, std::move(body)});
          break;
        case '+':
          if (remaining_new == 0) throw DiffSyntax(lineno, "more added lines than the header declares");
          --remaining_new;
          h.lines.push_back({LineKind::added, std::move(body)});
          break;
        default:
          throw DiffSyntax(lineno, "hunk ended early: expected " + std::to_string(remaining_old) +
                                       " more old and " + std::to_string(remaining_new) + " more new lines");
      }
      out.spans.back().end = line_end;
      continue;
    }

    if (starts_with(line, "@@")) {
      Hunk h = parse_header(line, lineno);
      if (file_has_hunks && h.old_start < last_old_start) {
        throw DiffSyntax(lineno, "hunk headers out of order");
      }
      h.file = file;
      file_has_hunks = true;
      last_old_start = h.old_start;
      remaining_old = h.old_len;
      remaining_new = h.new_len;
      in_hunk = true;
      out.patch.hunks.push_back(std::move(h));
      out.spans.push_back({line_begin, line_end});
    } else if (starts_with(line, "\\")) {
      if (!out.spans.empty()) out.spans.back().end = line_end;
    } else if (is_file_header(line)) {
      if (file_has_hunks) {
        ++file;
        file_has_hunks = false;
        last_old_start = 0;
      }
    } else if (text::trim(line).empty()) {
      // blank separator between sections
    } else if (out.patch.hunks.empty()) {
      throw DiffSyntax(lineno, "text before the first hunk header");
    } else {
      throw DiffSyntax(lineno, "line after a complete hunk does not start a new hunk");
    }
  }

  if (in_hunk && (remaining_old > 0 || remaining_new > 0)) {
    throw DiffSyntax(lineno + 1, "hunk ended early: expected " + std::to_string(remaining_old) +
                                     " more old and " + std::to_string(remaining_new) + " more new lines");
  }
  if (out.patch.hunks.empty()) throw DiffSyntax(1, "no hunk header found");
  return out;
}

}  // namespace

DiffPatch parse_unified_diff(std::string_view patch) { return parse_impl(patch).patch; }

std::vector<HunkSpan> hunk_spans(std::string_view patch) { return parse_impl(patch).spans; }

std::string render_unified_diff(const DiffPatch& patch) {
  std::string out;
  for (const auto& h : patch.hunks) {
    out += "@@ -" + std::to_string(h.old_start) + "," + std::to_string(h.old_len) + " +" +
           std::to_string(h.new_start) + "," + std::to_string(h.new_len) + " @@" + h.section + "\n";
    for (const auto& l : h.lines) {
      out += l.kind == LineKind::context ? ' ' : l.kind == LineKind::added ? '+' : '-';
      out += l.text;
      out += '\n';
    }
  }
  return out;
}

}  // namespace crclean
