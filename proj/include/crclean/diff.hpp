#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace crclean {

enum class LineKind { context, added, removed };

struct DiffLine {
  LineKind kind;
  std::string text;
  friend bool operator==(const DiffLine&, const DiffLine&) = default;
};

struct Hunk {
  std::size_t old_start = 0;
  std::size_t old_len = 0;
  std::size_t new_start = 0;
  std::size_t new_len = 0;
  std::string section;    // text after the closing "@@", if any
  std::size_t file = 0;   // index of the file section the hunk belongs to
  std::vector<DiffLine> lines;

  /// Context and removed lines, in order: the old-file slice.
  std::vector<std::string> old_lines() const;
  /// Context and added lines, in order: the new-file slice.
  std::vector<std::string> new_lines() const;

  friend bool operator==(const Hunk&, const Hunk&) = default;
};

struct DiffPatch {
  std::vector<Hunk> hunks;
  friend bool operator==(const DiffPatch&, const DiffPatch&) = default;
};

/// Parses unified-diff text. File headers (`diff --git`, `---`, `+++`,
/// `index`, mode lines) are allowed between hunks and start a new file
/// section; "\ No newline at end of file" markers are ignored. Throws
/// DiffSyntax when a header is malformed or a body disagrees with it.
DiffPatch parse_unified_diff(std::string_view patch);

/// Renders hunks back to text (headers and bodies only, no file headers).
std::string render_unified_diff(const DiffPatch& patch);

/// Byte ranges of each hunk (header through last body line) in the source
/// text, used to truncate on hunk boundaries.
struct HunkSpan {
  std::size_t begin;
  std::size_t end;
};
std::vector<HunkSpan> hunk_spans(std::string_view patch);

}  // namespace crclean
