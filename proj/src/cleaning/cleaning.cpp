#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_map>

#include "crclean/cleaning.hpp"
#include "crclean/error.hpp"
#include "crclean/text.hpp"

namespace crclean {

std::pair<Dataset, CleanReport> apply_clean(const Dataset& dataset, const std::vector<Prediction>& predictions,
                                            ErrorPolicy policy) {
  std::unordered_map<std::string_view, const Prediction*> by_id;
  by_id.reserve(predictions.size());
  for (const auto& p : predictions) by_id.emplace(p.id, &p);

  CleanReport report;
  report.error_policy = policy;
  std::vector<ReviewInstance> kept;
  for (const auto& inst : dataset) {
    auto it = by_id.find(inst.id);
    if (it == by_id.end()) throw MissingPrediction(inst.id);
    const Prediction& p = *it->second;
    if (report.model.empty()) {
      report.model = p.model;
      report.prompt_variant = p.prompt_variant;
    }
    bool keep;
    if (p.is_error()) {
      ++report.error_predictions;
      keep = policy == ErrorPolicy::as_valid;
    } else {
      keep = *p.label == Label::valid;
    }
    auto& counts = report.per_split[inst.split];
    ++counts.input;
    if (keep) {
      ++counts.retained;
      kept.push_back(inst);
    }
  }
  report.input_size = dataset.size();
  report.retained_size = kept.size();
  report.removed_size = report.input_size - report.retained_size;
  report.retained_ratio =
      report.input_size == 0 ? 0.0 : static_cast<double>(report.retained_size) / static_cast<double>(report.input_size);
  return {Dataset(std::move(kept)), std::move(report)};
}

Json to_json(const CleanReport& r) {
  Json splits = Json::object();
  for (const auto& [split, c] : r.per_split) {
    splits[std::string(to_string(split))] = Json{{"input", c.input}, {"retained", c.retained}};
  }
  return Json{{"input", r.input_size},
              {"retained", r.retained_size},
              {"removed", r.removed_size},
              {"retained_ratio", r.retained_ratio},
              {"splits", splits},
              {"error_predictions", r.error_predictions},
              {"error_policy", r.error_policy == ErrorPolicy::as_noisy ? "noisy" : "valid"},
              {"model", r.model},
              {"prompt_variant", r.prompt_variant}};
}

std::string format_clean_report(const CleanReport& r) {
  std::ostringstream os;
  os << "classifier   " << (r.model.empty() ? "-" : r.model) << " (" << (r.prompt_variant.empty() ? "-" : r.prompt_variant)
     << ")\n";
  os << "input        " << r.input_size << "\n";
  os << "retained     " << r.retained_size << " (" << text::format_fixed(100.0 * r.retained_ratio, 1) << "%)\n";
  os << "removed      " << r.removed_size << "\n";
  os << "errors       " << r.error_predictions << " counted as "
     << (r.error_policy == ErrorPolicy::as_noisy ? "noisy" : "valid") << "\n";
  for (const auto& [split, c] : r.per_split) {
    std::string name(to_string(split));
    name.resize(12, ' ');
    os << name << ' ' << c.retained << " / " << c.input << "\n";
  }
  return os.str();
}

namespace {

// Selection sampling (Knuth's Algorithm S): one pass, keeps input order,
// every subset of the target size equally likely. Uses raw mt19937_64
// output so the draw sequence is identical across standard libraries.
std::vector<bool> select_indices(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<bool> chosen(n, false);
  std::size_t needed = k;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    const std::size_t remaining = n - i;
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (static_cast<double>(remaining) * u < static_cast<double>(needed)) {
      chosen[i] = true;
      --needed;
    }
  }
  return chosen;
}

}  // namespace

Dataset sample_controlled(const Dataset& dataset, std::size_t target_size, std::uint64_t seed) {
  if (target_size > dataset.size()) {
    throw TargetTooLarge("target size " + std::to_string(target_size) + " exceeds dataset size " +
                         std::to_string(dataset.size()));
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  const auto chosen = select_indices(dataset.size(), target_size, rng);
  std::vector<ReviewInstance> out;
  out.reserve(target_size);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (chosen[i]) out.push_back(dataset[i]);
  }
  return Dataset(std::move(out));
}

Dataset sample_controlled_per_split(const Dataset& dataset, const std::map<Split, std::size_t>& targets,
                                    std::uint64_t seed) {
  std::vector<ReviewInstance> out;
  for (auto split : kAllSplits) {
    auto it = targets.find(split);
    if (it == targets.end()) continue;
    Dataset part = dataset.filter_split(split);
    if (it->second > part.size()) {
      throw TargetTooLarge(std::string(to_string(split)) + " target " + std::to_string(it->second) +
                           " exceeds split size " + std::to_string(part.size()));
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(split)};
    std::mt19937_64 rng(seq);
    const auto chosen = select_indices(part.size(), it->second, rng);
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (chosen[i]) out.push_back(part[i]);
    }
  }
  // Restore the dataset's interleaving of splits.
  std::unordered_map<std::string_view, std::size_t> pos;
  for (std::size_t i = 0; i < dataset.size(); ++i) pos.emplace(dataset[i].id, i);
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return pos.at(a.id) < pos.at(b.id); });
  return Dataset(std::move(out));
}

ValidRatio valid_ratio(const std::vector<Label>& predicted, const std::vector<Label>& gold) {
  if (predicted.size() != gold.size()) throw LengthMismatch(predicted.size(), gold.size());
  std::size_t pred_valid = 0, hit = 0, gold_valid = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == Label::valid) ++gold_valid;
    if (predicted[i] == Label::valid) {
      ++pred_valid;
      if (gold[i] == Label::valid) ++hit;
    }
  }
  if (pred_valid == 0) throw EmptyPredictedValid();
  ValidRatio r;
  r.predicted_valid = pred_valid;
  r.ratio = static_cast<double>(hit) / static_cast<double>(pred_valid);
  r.baseline = static_cast<double>(gold_valid) / static_cast<double>(gold.size());
  r.delta = r.ratio - r.baseline;
  return r;
}

}  // namespace crclean
