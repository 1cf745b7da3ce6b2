#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crclean/jsonl.hpp"

namespace crclean {

enum class Label { valid, noisy };

std::string_view to_string(Label label) noexcept;
/// Case-insensitive "valid"/"noisy"; nullopt otherwise.
std::optional<Label> parse_label(std::string_view s) noexcept;

enum class Split { train, validation, test };
inline constexpr std::array<Split, 3> kAllSplits{Split::train, Split::validation, Split::test};

std::string_view to_string(Split split) noexcept;
/// Accepts train, validation (also "valid", "dev"), test; case-insensitive.
std::optional<Split> parse_split(std::string_view s) noexcept;

/// One (code change, review comment) pair.
struct ReviewInstance {
  std::string id;
  std::string patch;    // unified diff of the change
  std::string comment;  // reviewer's natural-language comment
  std::string lang = "unknown";
  Split split = Split::train;
  std::optional<Label> gold_label;
  /// Record fields the mapping does not name. Written back verbatim.
  Json extra = Json::object();

  friend bool operator==(const ReviewInstance&, const ReviewInstance&) = default;
};

/// Maps record keys onto ReviewInstance fields.
struct FieldMapping {
  std::string id = "id";
  std::string patch = "patch";
  std::string comment = "msg";
  std::string lang = "lang";
  std::string split = "split";
  std::string label = "label";
};

/// Ordered, id-unique collection of instances. Immutable once built.
class Dataset {
 public:
  Dataset() = default;
  /// Throws DuplicateId.
  explicit Dataset(std::vector<ReviewInstance> instances);

  const std::vector<ReviewInstance>& instances() const noexcept { return instances_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }
  auto begin() const noexcept { return instances_.begin(); }
  auto end() const noexcept { return instances_.end(); }
  const ReviewInstance& operator[](std::size_t i) const { return instances_[i]; }

  const ReviewInstance* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  /// Instances of one split, original order kept.
  Dataset filter_split(Split split) const;

  friend bool operator==(const Dataset& a, const Dataset& b) { return a.instances_ == b.instances_; }

 private:
  std::vector<ReviewInstance> instances_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class RejectKind { malformed_record, duplicate_id };

struct RejectedRecord {
  std::size_t line = 0;  // 1-based
  RejectKind kind = RejectKind::malformed_record;
  std::string reason;
  std::string raw;
};

struct ParseOptions {
  FieldMapping fields;
  /// Split used when a record has no split field. Not warned about when set.
  std::optional<Split> default_split;
};

struct ParseResult {
  Dataset dataset;
  std::vector<RejectedRecord> rejects;
  std::vector<std::string> warnings;
  std::size_t lines_read = 0;
};

/// Reads line-delimited JSON records. Every input line ends up either in
/// the dataset or in `rejects`.
ParseResult parse_dataset(std::istream& in, const ParseOptions& options = {});
ParseResult parse_dataset_file(const std::filesystem::path& path, const ParseOptions& options = {});

Json to_record(const ReviewInstance& instance, const FieldMapping& fields = {});

/// Returns the number of records written. Throws IoError when the sink fails.
std::size_t write_dataset(const Dataset& dataset, std::ostream& out, const FieldMapping& fields = {});
std::size_t write_dataset_file(const Dataset& dataset, const std::filesystem::path& path,
                               const FieldMapping& fields = {});

/// Rejects report: the raw record (when it parsed as an object) plus `reason` and `line`.
void write_rejects(const std::vector<RejectedRecord>& rejects, std::ostream& out);

struct DatasetStats {
  std::size_t total = 0;
  std::map<Split, std::size_t> per_split;
  std::map<std::string, std::size_t> per_language;
  std::map<Label, std::size_t> per_gold_label;
  std::size_t unlabeled = 0;

  std::size_t count(Split s) const {
    auto it = per_split.find(s);
    return it == per_split.end() ? 0 : it->second;
  }
};

DatasetStats dataset_stats(const Dataset& dataset);
Json to_json(const DatasetStats& stats);
std::string format_stats_table(const DatasetStats& stats);

}  // namespace crclean
