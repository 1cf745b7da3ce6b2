#include <map>
#include <ostream>

#include "crclean/annotate.hpp"
#include "crclean/error.hpp"
#include "crclean/metrics.hpp"
#include "crclean/text.hpp"

namespace crclean {
namespace {

std::string_view status_name(AnnotationStatus s) {
  switch (s) {
    case AnnotationStatus::pending: return "pending";
    case AnnotationStatus::labeled: return "labeled";
    case AnnotationStatus::skipped: return "skipped";
  }
  return "pending";
}

AnnotationEntry entry_from_json(const Json& r) {
  AnnotationEntry e;
  e.id = r.at("id").get<std::string>();
  const auto status = r.at("status").get<std::string>();
  if (status == "pending") e.status = AnnotationStatus::pending;
  else if (status == "labeled") e.status = AnnotationStatus::labeled;
  else if (status == "skipped") e.status = AnnotationStatus::skipped;
  else throw Error("unknown status '" + status + "'");
  if (!r.at("label").is_null()) {
    e.label = parse_label(r.at("label").get<std::string>());
    if (!e.label) throw Error("unknown label");
  }
  if ((e.status == AnnotationStatus::labeled) != e.label.has_value()) throw Error("status and label disagree");
  return e;
}

std::vector<AnnotationEntry> load_entries(const std::filesystem::path& path) {
  std::vector<AnnotationEntry> out;
  std::vector<Json> records;
  try {
    records = jsonl::read_records(path);
  } catch (const IoError& e) {
    throw ResumeCorrupt(e.what());
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      out.push_back(entry_from_json(records[i]));
    } catch (const std::exception& e) {
      throw ResumeCorrupt(path.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

AnnotationSession::AnnotationSession(const Dataset& sample, std::filesystem::path label_file)
    : sample_(sample), path_(std::move(label_file)) {
  if (std::filesystem::exists(path_)) {
    entries_ = load_entries(path_);
    if (entries_.size() != sample_.size()) {
      throw ResumeCorrupt(path_.string() + " lists " + std::to_string(entries_.size()) + " instances, sample has " +
                          std::to_string(sample_.size()));
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].id != sample_[i].id) {
        throw ResumeCorrupt(path_.string() + ": record " + std::to_string(i + 1) + " is '" + entries_[i].id +
                            "', sample has '" + sample_[i].id + "'");
      }
    }
  } else {
    for (const auto& inst : sample_) entries_.push_back({inst.id, AnnotationStatus::pending, std::nullopt});
    persist();
  }
}

std::size_t AnnotationSession::first_pending() const noexcept {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].status == AnnotationStatus::pending) return i;
  }
  return entries_.size();
}

void AnnotationSession::persist() const {
  std::vector<Json> records;
  for (const auto& e : entries_) {
    records.push_back(Json{{"id", e.id},
                           {"status", std::string(status_name(e.status))},
                           {"label", e.label ? Json(std::string(to_string(*e.label))) : Json(nullptr)}});
  }
  jsonl::write_records(path_, records);
}

void AnnotationSession::render(std::ostream& out, std::size_t index) const {
  const auto& inst = sample_[index];
  const auto& e = entries_[index];
  out << "\n[" << index + 1 << "/" << entries_.size() << "] " << inst.id;
  if (e.status != AnnotationStatus::pending) {
    out << "  (currently " << (e.label ? to_string(*e.label) : std::string_view("skipped")) << ")";
  }
  out << "\n--- diff ---\n" << inst.patch;
  if (!inst.patch.empty() && inst.patch.back() != '\n') out << "\n";
  out << "--- comment ---\n" << inst.comment << "\n"
      << "[v]alid  [n]oisy  [s]kip  [b]ack  [q]uit > " << std::flush;
}

std::size_t AnnotationSession::run(const std::function<int()>& next_key, std::ostream& out,
                                   const std::string& guidelines) {
  if (!guidelines.empty()) out << guidelines << (guidelines.back() == '\n' ? "" : "\n");
  std::size_t decisions = 0;
  std::size_t cursor = first_pending();
  while (cursor < entries_.size()) {
    render(out, cursor);
    int key = 0;
    do {
      key = next_key();
    } while (key != EOF && text::is_space(static_cast<char>(key)));
    if (key == EOF || key == 'q' || key == 'Q') break;
    auto& e = entries_[cursor];
    switch (key) {
      case 'v': case 'V':
        e.status = AnnotationStatus::labeled;
        e.label = Label::valid;
        break;
      case 'n': case 'N':
        e.status = AnnotationStatus::labeled;
        e.label = Label::noisy;
        break;
      case 's': case 'S':
        e.status = AnnotationStatus::skipped;
        e.label.reset();
        break;
      case 'b': case 'B':
        if (cursor > 0) --cursor;
        continue;
      default:
        out << "\nunknown key '" << static_cast<char>(key) << "'\n";
        continue;
    }
    persist();
    ++decisions;
    // After going back, continue with the next undecided instance.
    const auto next = first_pending();
    cursor = cursor + 1 < entries_.size() && entries_[cursor + 1].status == AnnotationStatus::pending ? cursor + 1
                                                                                                     : next;
  }
  out << "\n" << first_pending() << " of " << entries_.size() << " decided, labels in " << path_.string() << "\n";
  return decisions;
}

std::vector<AnnotationEntry> read_annotation_file(const std::filesystem::path& path) {
  std::vector<AnnotationEntry> out;
  for (auto& e : load_entries(path)) {
    if (e.status != AnnotationStatus::pending) out.push_back(std::move(e));
  }
  return out;
}

AgreementReport compare_annotations(const std::vector<AnnotationEntry>& a, const std::vector<AnnotationEntry>& b) {
  std::map<std::string, Label> second;
  for (const auto& e : b) {
    if (e.label) second[e.id] = *e.label;
  }
  std::vector<Label> la, lb;
  for (const auto& e : a) {
    if (!e.label) continue;
    if (auto it = second.find(e.id); it != second.end()) {
      la.push_back(*e.label);
      lb.push_back(it->second);
    }
  }
  if (la.size() < 2) throw InvalidArgument("fewer than two instances labelled by both annotators");
  AgreementReport r;
  r.items = la.size();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < la.size(); ++i) agree += la[i] == lb[i];
  r.observed_agreement = static_cast<double>(agree) / static_cast<double>(la.size());
  r.kappa = cohens_kappa(la, lb);
  return r;
}

Json to_json(const AgreementReport& r) {
  return Json{{"items", r.items}, {"observed_agreement", r.observed_agreement}, {"kappa", r.kappa}};
}

}  // namespace crclean
