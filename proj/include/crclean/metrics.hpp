#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crclean/corpus.hpp"
#include "crclean/error.hpp"

namespace crclean {

/// 2x2 counts with `valid` as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;  // gold valid, predicted valid
  std::size_t fp = 0;  // gold noisy, predicted valid
  std::size_t fn = 0;  // gold valid, predicted noisy
  std::size_t tn = 0;  // gold noisy, predicted noisy

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  /// Same counts seen with `noisy` as the positive class.
  ConfusionMatrix swapped() const noexcept { return {tn, fn, fp, tp}; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws LengthMismatch.
ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> predicted);

struct ClassMetrics {
  double precision = 0.0;  // fractions in [0, 1]
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;          // gold count of the class
  std::size_t predicted_count = 0;  // how often the class was predicted
  bool no_predictions = false;      // precision defined as 0
  bool no_support = false;          // recall defined as 0
};

ClassMetrics class_metrics(const ConfusionMatrix& cm, Label positive);

/// Support-weighted mean of both classes' metrics (gold supports). Throws
/// InvalidArgument for an empty matrix.
ClassMetrics weighted_metrics(const ConfusionMatrix& cm);

struct ClassificationReport {
  ConfusionMatrix matrix;
  ClassMetrics overall;
  ClassMetrics valid;
  ClassMetrics noisy;
};

ClassificationReport classification_report(const ConfusionMatrix& cm);
Json to_json(const ClassificationReport& report);
/// Header plus one row laid out as Overall P/R/F1 | Valid P/R/F1/# | Noisy P/R/F1/#,
/// percentages to one decimal.
std::string format_classification_table(const ClassificationReport& report, const std::string& row_name);

/// Cohen's kappa over two aligned label sequences of any equality-comparable,
/// ordered type. Identical constant sequences give 1. Throws LengthMismatch,
/// InvalidArgument (fewer than two items) or DegenerateMarginals.
template <typename T>
double cohens_kappa(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
  if (a.size() < 2) throw InvalidArgument("kappa needs at least two rated items");
  const double n = static_cast<double>(a.size());
  std::map<T, std::pair<std::size_t, std::size_t>> marginals;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  const double p_o = static_cast<double>(agree) / n;
  double p_e = 0.0;
  for (const auto& [label, counts] : marginals) {
    p_e += (static_cast<double>(counts.first) / n) * (static_cast<double>(counts.second) / n);
  }
  if (agree == a.size()) return 1.0;
  if (1.0 - p_e <= 0.0) throw DegenerateMarginals();
  return (p_o - p_e) / (1.0 - p_e);
}

template <typename T>
double cohens_kappa(const std::vector<T>& a, const std::vector<T>& b) {
  return cohens_kappa(std::span<const T>(a), std::span<const T>(b));
}

enum class WilcoxonMethod { exact, normal_approximation };

struct WilcoxonResult {
  double statistic = 0.0;  // W+, sum of ranks of positive differences
  std::size_t n_effective = 0;
  double p_value = 1.0;
  WilcoxonMethod method = WilcoxonMethod::exact;
};

inline constexpr std::size_t kWilcoxonExactThreshold = 12;

enum class WilcoxonMode { automatic, force_exact, force_normal };

/// One-sided signed-rank test of "x tends to be greater than y". Zero
/// differences are dropped; tied magnitudes share average ranks. Exact
/// enumeration when n_effective <= 12, else a normal approximation with tie
/// correction and continuity correction. Throws LengthMismatch or
/// AllZeroDifferences.
WilcoxonResult wilcoxon_one_sided(std::span<const double> x, std::span<const double> y,
                                  WilcoxonMode mode = WilcoxonMode::automatic);

std::string_view to_string(WilcoxonMethod m) noexcept;

}  // namespace crclean
