#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "crclean/topics.hpp"

namespace crclean {

double npmi(std::size_t df_x, std::size_t df_y, std::size_t df_xy, std::size_t n_docs) {
  if (df_xy == 0 || n_docs == 0) return -1.0;
  if (df_xy == n_docs) return 1.0;
  const double n = static_cast<double>(n_docs);
  const double pxy = static_cast<double>(df_xy) / n;
  const double px = static_cast<double>(df_x) / n;
  const double py = static_cast<double>(df_y) / n;
  const double v = std::log(pxy / (px * py)) / -std::log(pxy);
  return std::clamp(v, -1.0, 1.0);
}

CoherenceReport coherence(const std::vector<std::vector<std::string>>& terms_per_cluster,
                          const std::vector<std::vector<std::string>>& documents) {
  std::vector<std::set<std::string>> doc_sets;
  doc_sets.reserve(documents.size());
  for (const auto& d : documents) doc_sets.emplace_back(d.begin(), d.end());

  std::unordered_map<std::string, std::size_t> df;
  auto doc_freq = [&](const std::string& t) {
    auto it = df.find(t);
    if (it != df.end()) return it->second;
    std::size_t c = 0;
    for (const auto& s : doc_sets) c += s.count(t);
    df.emplace(t, c);
    return c;
  };

  CoherenceReport report;
  double sum = 0.0;
  std::size_t scored = 0;
  for (const auto& raw_terms : terms_per_cluster) {
    const std::vector<std::string> terms = [&] {
      std::vector<std::string> u;
      std::set<std::string> seen;
      for (const auto& t : raw_terms) {
        if (seen.insert(t).second) u.push_back(t);
      }
      return u;
    }();
    ClusterCoherence cc;
    if (terms.size() < 2) {
      cc.insufficient_terms = true;
      report.per_cluster.push_back(cc);
      continue;
    }
    double pair_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        std::size_t joint = 0;
        for (const auto& s : doc_sets) joint += (s.count(terms[i]) && s.count(terms[j])) ? 1 : 0;
        pair_sum += npmi(doc_freq(terms[i]), doc_freq(terms[j]), joint, doc_sets.size());
        ++pairs;
      }
    }
    cc.score = pair_sum / static_cast<double>(pairs);
    sum += *cc.score;
    ++scored;
    report.per_cluster.push_back(cc);
  }
  report.mean = scored ? sum / static_cast<double>(scored) : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace crclean
