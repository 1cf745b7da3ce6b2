#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "crclean/corpus.hpp"
#include "crclean/metrics.hpp"

namespace crclean {

enum class StopwordMode { keep_stopwords, drop_stopwords };

using StopwordSet = std::unordered_set<std::string>;

/// The built-in English list (the common NLTK list).
const StopwordSet& default_stopwords();
/// One lowercase word per line; '#' starts a comment.
StopwordSet load_stopwords(const std::filesystem::path& path);

struct TokenizedComment {
  std::vector<std::string> tokens;
  std::string source;
};

/// Lowercases, splits on whitespace, makes every punctuation character its
/// own token, and keeps backtick-delimited code spans as single verbatim
/// tokens (backticks stripped). In drop mode, tokens in `stopwords` go.
TokenizedComment tokenize(std::string_view text, StopwordMode mode = StopwordMode::keep_stopwords,
                          const StopwordSet& stopwords = default_stopwords());

/// Sentence BLEU-4 in [0, 100]: geometric mean of clipped 1..4-gram
/// precisions times the brevity penalty. Zero matches for n >= 2 are
/// add-one smoothed; zero unigram matches use a 1e-15 floor. An empty
/// candidate scores 0.
double bleu4(const std::vector<std::string>& candidate, const std::vector<std::string>& reference);
inline double bleu4(const TokenizedComment& candidate, const TokenizedComment& reference) {
  return bleu4(candidate.tokens, reference.tokens);
}

enum class SubsetSource { our, tufano };

struct SubsetLabel {
  std::string id;
  Label label;
  SubsetSource source;
};

std::vector<SubsetLabel> read_subset_labels(const std::filesystem::path& path);

/// id -> text, in file order.
using TextTable = std::vector<std::pair<std::string, std::string>>;
TextTable read_text_table(const std::filesystem::path& path, const std::string& text_field = "text");

/// id -> per-instance BLEU-4, aligned with the reference order.
using ScoreTable = std::vector<std::pair<std::string, double>>;

/// Scores every reference id. Throws IdMismatch when the generation ids are
/// not exactly the reference ids.
ScoreTable score_generations(const TextTable& generations, const TextTable& references, StopwordMode mode,
                             const StopwordSet& stopwords = default_stopwords());

struct SubsetSummary {
  std::string name;
  std::size_t count = 0;
  double mean = 0.0;  // NaN when empty
  std::optional<double> baseline_mean;
  std::optional<double> relative_delta;  // (mean - base) / base
  std::optional<WilcoxonResult> wilcoxon;
  std::string wilcoxon_note;  // why the test is missing, if it is
};

struct BleuReport {
  ScoreTable scores;
  std::vector<SubsetSummary> subsets;  // test, valid/noisy per source, combined

  const SubsetSummary* find(std::string_view name) const;
};

/// Aggregates per-instance scores into subset means, and against a baseline
/// adds relative deltas and one-sided Wilcoxon (new > base) per subset.
/// Throws IdMismatch for labels or baseline ids outside the score table.
BleuReport assemble_report(const ScoreTable& scores, const std::vector<SubsetLabel>& labels,
                           const ScoreTable* baseline = nullptr);

BleuReport bleu_report(const TextTable& generations, const TextTable& references,
                       const std::vector<SubsetLabel>& labels, const TextTable* baseline_generations,
                       StopwordMode mode, const StopwordSet& stopwords = default_stopwords());

/// "5.4%↑" style.
std::string format_delta(double relative_delta);
Json to_json(const BleuReport& report);
std::string format_bleu_table(const BleuReport& report, const std::string& row_name);

}  // namespace crclean
