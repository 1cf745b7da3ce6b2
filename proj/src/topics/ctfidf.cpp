#include <algorithm>
#include <cmath>

#include "crclean/error.hpp"
#include "crclean/topics.hpp"

namespace crclean {

std::vector<TermWeights> ctfidf(const std::vector<std::size_t>& assignment, std::size_t k,
                                const std::vector<std::vector<std::string>>& documents) {
  if (assignment.size() != documents.size()) throw DimensionMismatch("assignment and documents differ in length");
  std::vector<std::map<std::string, std::size_t>> tf(k);
  std::map<std::string, std::size_t> total;
  std::size_t tokens = 0;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (assignment[i] >= k) throw InvalidArgument("cluster id out of range");
    for (const auto& t : documents[i]) {
      ++tf[assignment[i]][t];
      ++total[t];
      ++tokens;
    }
  }
  const double avg = static_cast<double>(tokens) / static_cast<double>(k);

  std::vector<TermWeights> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto& [term, count] : tf[c]) {
      out[c][term] = static_cast<double>(count) * std::log(1.0 + avg / static_cast<double>(total[term]));
    }
  }
  return out;
}

std::vector<std::string> top_terms(const TermWeights& weights, std::size_t n) {
  std::vector<std::pair<std::string, double>> sorted(weights.begin(), weights.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < sorted.size() && i < n; ++i) out.push_back(sorted[i].first);
  return out;
}

}  // namespace crclean
