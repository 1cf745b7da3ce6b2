#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "crclean/corpus.hpp"
#include "crclean/error.hpp"
#include "crclean/text.hpp"

namespace crclean {

std::string_view to_string(Label label) noexcept {
  return label == Label::valid ? "valid" : "noisy";
}

std::optional<Label> parse_label(std::string_view s) noexcept {
  s = text::trim(s);
  if (text::iequals(s, "valid")) return Label::valid;
  if (text::iequals(s, "noisy")) return Label::noisy;
  return std::nullopt;
}

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view s) noexcept {
  s = text::trim(s);
  if (text::iequals(s, "train")) return Split::train;
  if (text::iequals(s, "validation") || text::iequals(s, "valid") || text::iequals(s, "dev")) {
    return Split::validation;
  }
  if (text::iequals(s, "test")) return Split::test;
  return std::nullopt;
}

Dataset::Dataset(std::vector<ReviewInstance> instances) : instances_(std::move(instances)) {
  index_.reserve(instances_.size());
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    if (!index_.emplace(instances_[i].id, i).second) throw DuplicateId(instances_[i].id);
  }
}

const ReviewInstance* Dataset::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &instances_[it->second];
}

Dataset Dataset::filter_split(Split split) const {
  std::vector<ReviewInstance> out;
  for (const auto& inst : instances_) {
    if (inst.split == split) out.push_back(inst);
  }
  return Dataset(std::move(out));
}

namespace {

// Returns the string value of a required field or throws MalformedRecord.
std::string required_string(const Json& rec, const std::string& key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end()) throw MalformedRecord(line, "missing field '" + key + "'");
  if (!it->is_string()) throw MalformedRecord(line, "field '" + key + "' is not a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const Json& rec, const std::string& key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  // Numeric ids are common in mined corpora.
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw MalformedRecord(line, "field '" + key + "' is not a string");
}

ReviewInstance decode(const Json& rec, std::size_t line, const ParseOptions& opt,
                      std::vector<std::string>& warnings) {
  const auto& f = opt.fields;
  if (!rec.is_object()) throw MalformedRecord(line, "record is not a JSON object");

  ReviewInstance inst;
  inst.patch = required_string(rec, f.patch, line);
  inst.comment = required_string(rec, f.comment, line);
  if (text::trim(inst.comment).empty()) throw MalformedRecord(line, "empty comment");
  if (inst.patch.empty()) throw MalformedRecord(line, "empty patch");

  if (auto id = optional_string(rec, f.id, line)) {
    if (id->empty()) throw MalformedRecord(line, "empty id");
    inst.id = std::move(*id);
  } else {
    inst.id = "L" + std::to_string(line);
  }

  if (auto lang = optional_string(rec, f.lang, line); lang && !text::trim(*lang).empty()) {
    inst.lang = std::move(*lang);
  } else {
    inst.lang = "unknown";
    warnings.push_back("line " + std::to_string(line) + ": no '" + f.lang + "' field, using \"unknown\"");
  }

  if (auto split = optional_string(rec, f.split, line)) {
    auto parsed = parse_split(*split);
    if (!parsed) throw MalformedRecord(line, "unknown split '" + *split + "'");
    inst.split = *parsed;
  } else if (opt.default_split) {
    inst.split = *opt.default_split;
  } else {
    inst.split = Split::train;
    warnings.push_back("line " + std::to_string(line) + ": no '" + f.split + "' field, using \"train\"");
  }

  if (auto label = optional_string(rec, f.label, line)) {
    auto parsed = parse_label(*label);
    if (!parsed) throw MalformedRecord(line, "unknown label '" + *label + "'");
    inst.gold_label = *parsed;
  }

  inst.extra = Json::object();
  for (auto it = rec.begin(); it != rec.end(); ++it) {
    const auto& k = it.key();
    if (k == f.id || k == f.patch || k == f.comment || k == f.lang || k == f.split || k == f.label) continue;
    inst.extra[k] = it.value();
  }
  return inst;
}

}  // namespace

ParseResult parse_dataset(std::istream& in, const ParseOptions& options) {
  ParseResult result;
  std::vector<ReviewInstance> accepted;
  std::unordered_map<std::string, std::size_t> seen;  // id -> first line
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) {
      result.rejects.push_back({lineno, RejectKind::malformed_record, "blank line", line});
      continue;
    }
    try {
      Json rec = Json::parse(line);
      ReviewInstance inst = decode(rec, lineno, options, result.warnings);
      auto [it, fresh] = seen.emplace(inst.id, lineno);
      if (!fresh) {
        result.rejects.push_back({lineno, RejectKind::duplicate_id,
                                  "duplicate id '" + inst.id + "' (first seen on line " +
                                      std::to_string(it->second) + ")",
                                  line});
        continue;
      }
      accepted.push_back(std::move(inst));
    } catch (const MalformedRecord& e) {
      result.rejects.push_back({lineno, RejectKind::malformed_record, e.reason(), line});
    } catch (const Json::exception& e) {
      result.rejects.push_back({lineno, RejectKind::malformed_record, std::string("invalid JSON: ") + e.what(), line});
    }
  }
  if (in.bad()) throw IoError("read failed after line " + std::to_string(lineno));
  result.lines_read = lineno;
  result.dataset = Dataset(std::move(accepted));
  return result;
}

ParseResult parse_dataset_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_dataset(in, options);
}

Json to_record(const ReviewInstance& inst, const FieldMapping& f) {
  Json rec = inst.extra.is_object() ? inst.extra : Json::object();
  rec[f.id] = inst.id;
  rec[f.patch] = inst.patch;
  rec[f.comment] = inst.comment;
  rec[f.lang] = inst.lang;
  rec[f.split] = std::string(to_string(inst.split));
  if (inst.gold_label) rec[f.label] = std::string(to_string(*inst.gold_label));
  return rec;
}

std::size_t write_dataset(const Dataset& dataset, std::ostream& out, const FieldMapping& fields) {
  std::size_t n = 0;
  for (const auto& inst : dataset) {
    out << jsonl::dump_line(to_record(inst, fields));
    if (!out) throw IoError("write failed after " + std::to_string(n) + " records");
    ++n;
  }
  out.flush();
  if (!out) throw IoError("flush failed");
  return n;
}

std::size_t write_dataset_file(const Dataset& dataset, const std::filesystem::path& path,
                               const FieldMapping& fields) {
  std::ostringstream buf;
  auto n = write_dataset(dataset, buf, fields);
  jsonl::write_file_atomic(path, buf.str());
  return n;
}

void write_rejects(const std::vector<RejectedRecord>& rejects, std::ostream& out) {
  for (const auto& r : rejects) {
    Json rec = Json::object();
    try {
      if (auto parsed = Json::parse(r.raw); parsed.is_object()) rec = std::move(parsed);
      else rec["raw"] = r.raw;
    } catch (const Json::exception&) {
      rec["raw"] = r.raw;
    }
    rec["reason"] = r.reason;
    rec["line"] = r.line;
    out << jsonl::dump_line(rec);
  }
  if (!out) throw IoError("write failed for rejects report");
}

DatasetStats dataset_stats(const Dataset& dataset) {
  DatasetStats s;
  s.total = dataset.size();
  for (const auto& inst : dataset) {
    ++s.per_split[inst.split];
    ++s.per_language[inst.lang];
    if (inst.gold_label) ++s.per_gold_label[*inst.gold_label];
    else ++s.unlabeled;
  }
  return s;
}

Json to_json(const DatasetStats& stats) {
  Json j;
  j["total"] = stats.total;
  Json splits = Json::object();
  for (auto sp : kAllSplits) splits[std::string(to_string(sp))] = stats.count(sp);
  j["splits"] = splits;
  Json langs = Json::object();
  for (const auto& [lang, n] : stats.per_language) langs[lang] = n;
  j["languages"] = langs;
  Json labels = Json::object();
  for (const auto& [label, n] : stats.per_gold_label) labels[std::string(to_string(label))] = n;
  j["gold_labels"] = labels;
  j["unlabeled"] = stats.unlabeled;
  return j;
}

std::string format_stats_table(const DatasetStats& stats) {
  std::ostringstream os;
  os << "split        count\n";
  for (auto sp : kAllSplits) {
    std::string name(to_string(sp));
    name.resize(12, ' ');
    os << name << ' ' << stats.count(sp) << '\n';
  }
  os << "total        " << stats.total << '\n';
  if (!stats.per_language.empty()) {
    os << "\nlanguage     count\n";
    for (const auto& [lang, n] : stats.per_language) {
      std::string name = lang;
      if (name.size() < 12) name.resize(12, ' ');
      os << name << ' ' << n << '\n';
    }
  }
  if (!stats.per_gold_label.empty()) {
    os << "\nlabel        count\n";
    for (const auto& [label, n] : stats.per_gold_label) {
      std::string name(to_string(label));
      name.resize(12, ' ');
      os << name << ' ' << n << '\n';
    }
    os << "unlabeled    " << stats.unlabeled << '\n';
  }
  return os.str();
}

}  // namespace crclean
