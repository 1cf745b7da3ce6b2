#include <cmath>
#include <map>

#include "crclean/bleu.hpp"

namespace crclean {
namespace {

constexpr int kMaxOrder = 4;
constexpr double kUnigramFloor = 1e-15;

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

double bleu4(const std::vector<std::string>& candidate, const std::vector<std::string>& reference) {
  if (candidate.empty()) return 0.0;

  double log_sum = 0.0;
  for (int order = 1; order <= kMaxOrder; ++order) {
    const auto n = static_cast<std::size_t>(order);
    const auto cand = count_ngrams(candidate, n);
    const auto ref = count_ngrams(reference, n);
    std::size_t matches = 0;
    for (const auto& [gram, count] : cand) {
      if (auto it = ref.find(gram); it != ref.end()) matches += std::min(count, it->second);
    }
    const std::size_t total = candidate.size() >= n ? candidate.size() - n + 1 : 0;

    double precision;
    if (matches > 0) {
      precision = static_cast<double>(matches) / static_cast<double>(total);
    } else if (order == 1) {
      precision = kUnigramFloor / static_cast<double>(total);
    } else {
      precision = 1.0 / static_cast<double>(total + 1);
    }
    log_sum += std::log(precision);
  }

  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double log_bp = c < r ? 1.0 - r / c : 0.0;
  const double score = 100.0 * std::exp(log_sum / kMaxOrder + log_bp);
  return std::min(score, 100.0);
}

}  // namespace crclean
