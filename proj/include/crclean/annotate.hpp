#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crclean/corpus.hpp"

namespace crclean {

enum class AnnotationStatus { pending, labeled, skipped };

struct AnnotationEntry {
  std::string id;
  AnnotationStatus status = AnnotationStatus::pending;
  std::optional<Label> label;
};

/// Terminal labelling of a sample, one instance at a time. The label file
/// holds one record per sample instance, in sample order, and is rewritten
/// atomically after every decision, so a session can stop at any point and
/// resume at the first pending instance.
class AnnotationSession {
 public:
  /// Loads `label_file` when it exists. Throws ResumeCorrupt when it does
  /// not parse or does not list exactly the sample's ids in order.
  AnnotationSession(const Dataset& sample, std::filesystem::path label_file);

  const std::vector<AnnotationEntry>& entries() const noexcept { return entries_; }
  /// Index of the first pending instance; size() when all are decided.
  std::size_t first_pending() const noexcept;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Reads keys until the sample is done, `q`, or end of input:
  /// v = valid, n = noisy, s = skip, b = back, q = quit.
  /// Returns the number of decisions recorded.
  std::size_t run(const std::function<int()>& next_key, std::ostream& out, const std::string& guidelines = {});

 private:
  void render(std::ostream& out, std::size_t index) const;
  void persist() const;

  const Dataset& sample_;
  std::filesystem::path path_;
  std::vector<AnnotationEntry> entries_;
};

/// Labels from an annotation file, pending entries left out.
std::vector<AnnotationEntry> read_annotation_file(const std::filesystem::path& path);

struct AgreementReport {
  std::size_t items = 0;  // ids labelled by both annotators
  double observed_agreement = 0.0;
  double kappa = 0.0;
};

/// Cohen's kappa over the ids both files label. Throws InvalidArgument when
/// fewer than two ids are shared.
AgreementReport compare_annotations(const std::vector<AnnotationEntry>& a, const std::vector<AnnotationEntry>& b);
Json to_json(const AgreementReport& r);

}  // namespace crclean
