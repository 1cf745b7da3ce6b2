#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "crclean/bleu.hpp"
#include "crclean/error.hpp"
#include "crclean/jsonl.hpp"
#include "crclean/text.hpp"

namespace crclean {

std::vector<SubsetLabel> read_subset_labels(const std::filesystem::path& path) {
  std::vector<SubsetLabel> out;
  for (const auto& rec : jsonl::read_records(path)) {
    try {
      SubsetLabel l;
      l.id = rec.at("id").is_string() ? rec.at("id").get<std::string>() : rec.at("id").dump();
      auto label = parse_label(rec.at("label").get<std::string>());
      if (!label) throw IoError(path.string() + ": unknown label for id " + l.id);
      l.label = *label;
      const auto source = rec.value("source", std::string("our"));
      if (text::iequals(source, "our")) l.source = SubsetSource::our;
      else if (text::iequals(source, "tufano")) l.source = SubsetSource::tufano;
      else throw IoError(path.string() + ": unknown source '" + source + "'");
      out.push_back(std::move(l));
    } catch (const Json::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  return out;
}

TextTable read_text_table(const std::filesystem::path& path, const std::string& text_field) {
  TextTable out;
  for (const auto& rec : jsonl::read_records(path)) {
    try {
      const auto& id = rec.at("id");
      out.emplace_back(id.is_string() ? id.get<std::string>() : id.dump(), rec.at(text_field).get<std::string>());
    } catch (const Json::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  return out;
}

ScoreTable score_generations(const TextTable& generations, const TextTable& references, StopwordMode mode,
                             const StopwordSet& stopwords) {
  std::unordered_map<std::string_view, const std::string*> gen;
  for (const auto& [id, t] : generations) {
    if (!gen.emplace(id, &t).second) throw IdMismatch("duplicate generation id " + id);
  }
  if (gen.size() != references.size()) {
    throw IdMismatch(std::to_string(generations.size()) + " generations for " + std::to_string(references.size()) +
                     " references");
  }
  ScoreTable out;
  out.reserve(references.size());
  for (const auto& [id, ref] : references) {
    auto it = gen.find(id);
    if (it == gen.end()) throw IdMismatch("no generation for reference id " + id);
    out.emplace_back(id, bleu4(tokenize(*it->second, mode, stopwords), tokenize(ref, mode, stopwords)));
  }
  return out;
}

const SubsetSummary* BleuReport::find(std::string_view name) const {
  for (const auto& s : subsets) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

BleuReport assemble_report(const ScoreTable& scores, const std::vector<SubsetLabel>& labels,
                           const ScoreTable* baseline) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!index.emplace(scores[i].first, i).second) throw IdMismatch("duplicate score id " + scores[i].first);
  }

  std::vector<double> base_scores;
  if (baseline) {
    if (baseline->size() != scores.size()) throw IdMismatch("baseline covers a different number of instances");
    base_scores.assign(scores.size(), 0.0);
    std::vector<bool> seen(scores.size(), false);
    for (const auto& [id, s] : *baseline) {
      auto it = index.find(id);
      if (it == index.end() || seen[it->second]) throw IdMismatch("baseline id " + id + " does not match");
      seen[it->second] = true;
      base_scores[it->second] = s;
    }
  }

  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  {
    std::vector<std::size_t> all(scores.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    groups.emplace_back("test", std::move(all));
  }
  auto members = [&](std::optional<SubsetSource> source, Label label) {
    std::vector<std::size_t> out;
    std::unordered_set<std::size_t> seen;
    for (const auto& l : labels) {
      auto it = index.find(l.id);
      if (it == index.end()) throw IdMismatch("labeled id " + l.id + " has no score");
      if (l.label != label || (source && l.source != *source)) continue;
      if (seen.insert(it->second).second) out.push_back(it->second);
    }
    return out;
  };
  if (!labels.empty()) {
    groups.emplace_back("valid_combined", members(std::nullopt, Label::valid));
    groups.emplace_back("noisy_combined", members(std::nullopt, Label::noisy));
    groups.emplace_back("valid_our", members(SubsetSource::our, Label::valid));
    groups.emplace_back("noisy_our", members(SubsetSource::our, Label::noisy));
    groups.emplace_back("valid_tufano", members(SubsetSource::tufano, Label::valid));
    groups.emplace_back("noisy_tufano", members(SubsetSource::tufano, Label::noisy));
  }

  BleuReport report;
  report.scores = scores;
  for (auto& [name, idx] : groups) {
    SubsetSummary s;
    s.name = name;
    s.count = idx.size();
    double sum = 0.0, base_sum = 0.0;
    std::vector<double> x, y;
    for (auto i : idx) {
      sum += scores[i].second;
      if (baseline) {
        base_sum += base_scores[i];
        x.push_back(scores[i].second);
        y.push_back(base_scores[i]);
      }
    }
    s.mean = idx.empty() ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(idx.size());
    if (baseline && !idx.empty()) {
      s.baseline_mean = base_sum / static_cast<double>(idx.size());
      if (*s.baseline_mean != 0.0) s.relative_delta = (s.mean - *s.baseline_mean) / *s.baseline_mean;
      try {
        s.wilcoxon = wilcoxon_one_sided(x, y);
      } catch (const AllZeroDifferences& e) {
        s.wilcoxon_note = e.what();
      }
    }
    report.subsets.push_back(std::move(s));
  }
  return report;
}

BleuReport bleu_report(const TextTable& generations, const TextTable& references,
                       const std::vector<SubsetLabel>& labels, const TextTable* baseline_generations,
                       StopwordMode mode, const StopwordSet& stopwords) {
  const ScoreTable scores = score_generations(generations, references, mode, stopwords);
  if (!baseline_generations) return assemble_report(scores, labels);
  const ScoreTable base = score_generations(*baseline_generations, references, mode, stopwords);
  return assemble_report(scores, labels, &base);
}

std::string format_delta(double relative_delta) {
  const double pct = 100.0 * relative_delta;
  return text::format_fixed(std::abs(pct), 1) + "%" + (pct < 0 ? "↓" : "↑");
}

Json to_json(const BleuReport& r) {
  Json subsets = Json::array();
  for (const auto& s : r.subsets) {
    Json j{{"name", s.name}, {"count", s.count}, {"mean", std::isnan(s.mean) ? Json(nullptr) : Json(s.mean)}};
    if (s.baseline_mean) j["baseline_mean"] = *s.baseline_mean;
    if (s.relative_delta) j["relative_delta"] = *s.relative_delta;
    if (s.wilcoxon) {
      j["wilcoxon"] = Json{{"statistic", s.wilcoxon->statistic},
                           {"n_effective", s.wilcoxon->n_effective},
                           {"p_value", s.wilcoxon->p_value},
                           {"method", std::string(to_string(s.wilcoxon->method))}};
    } else if (!s.wilcoxon_note.empty()) {
      j["wilcoxon_note"] = s.wilcoxon_note;
    }
    subsets.push_back(std::move(j));
  }
  Json scores = Json::array();
  for (const auto& [id, s] : r.scores) scores.push_back(Json{{"id", id}, {"bleu4", s}});
  return Json{{"subsets", subsets}, {"scores", scores}};
}

std::string format_bleu_table(const BleuReport& r, const std::string& row_name) {
  std::ostringstream head, row;
  std::string name = row_name;
  if (name.size() < 12) name.resize(12, ' ');
  head << std::string(name.size(), ' ');
  row << name;
  for (const auto& s : r.subsets) {
    std::string cell = std::isnan(s.mean) ? "-" : text::format_fixed(s.mean, 2);
    if (s.relative_delta) cell += " " + format_delta(*s.relative_delta);
    if (s.wilcoxon && s.wilcoxon->p_value < 0.05) cell += "*";
    std::string h = s.name + " (" + std::to_string(s.count) + ")";
    const std::size_t width = std::max<std::size_t>(h.size(), 16) + 2;
    // The arrows are three UTF-8 bytes but one column wide.
    const std::size_t cell_cols = cell.size() - (s.relative_delta ? 2 : 0);
    head << std::string(width - h.size(), ' ') << h;
    row << std::string(width > cell_cols ? width - cell_cols : 1, ' ') << cell;
  }
  return head.str() + "\n" + row.str() + "\n" + "* one-sided Wilcoxon signed-rank p < 0.05 against the baseline\n";
}

}  // namespace crclean
