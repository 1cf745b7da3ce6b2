#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crclean/corpus.hpp"
#include "crclean/gateway.hpp"

namespace crclean {

/// What an error-marked prediction counts as when cleaning.
enum class ErrorPolicy { as_noisy, as_valid };

struct SplitCounts {
  std::size_t input = 0;
  std::size_t retained = 0;
};

struct CleanReport {
  std::size_t input_size = 0;
  std::size_t retained_size = 0;
  std::size_t removed_size = 0;
  double retained_ratio = 0.0;  // retained / input, 0 for empty input
  std::map<Split, SplitCounts> per_split;
  std::size_t error_predictions = 0;
  ErrorPolicy error_policy = ErrorPolicy::as_noisy;
  std::string model;
  std::string prompt_variant;
};

Json to_json(const CleanReport& report);
std::string format_clean_report(const CleanReport& report);

/// Keeps instances whose prediction is valid, in dataset order. Throws
/// MissingPrediction when an instance has no prediction.
std::pair<Dataset, CleanReport> apply_clean(const Dataset& dataset, const std::vector<Prediction>& predictions,
                                            ErrorPolicy policy = ErrorPolicy::as_noisy);

/// Uniform sample of exactly `target_size` instances without replacement,
/// original order kept. Deterministic for a fixed (dataset order, seed).
/// Throws TargetTooLarge.
Dataset sample_controlled(const Dataset& dataset, std::size_t target_size, std::uint64_t seed);

/// Samples each split independently to its target; splits missing from
/// `targets` contribute nothing.
Dataset sample_controlled_per_split(const Dataset& dataset, const std::map<Split, std::size_t>& targets,
                                    std::uint64_t seed);

struct ValidRatio {
  double ratio = 0.0;     // gold-valid share among predicted-valid
  double baseline = 0.0;  // gold-valid share overall
  double delta = 0.0;     // ratio - baseline
  std::size_t predicted_valid = 0;
};

/// Throws LengthMismatch or EmptyPredictedValid.
ValidRatio valid_ratio(const std::vector<Label>& predicted, const std::vector<Label>& gold);

}  // namespace crclean
