#pragma once

// Slow, direct implementations used as references for the library code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace crclean::oracle {

inline std::size_t count_occurrences(const std::vector<std::string>& tokens, const std::vector<std::string>& gram) {
  std::size_t c = 0;
  for (std::size_t i = 0; i + gram.size() <= tokens.size(); ++i) {
    bool same = true;
    for (std::size_t k = 0; k < gram.size() && same; ++k) same = tokens[i + k] == gram[k];
    c += same;
  }
  return c;
}

// Sentence BLEU-4 with the library's smoothing rules, counting n-grams by
// scanning every window instead of hashing.
inline double bleu4(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
  if (cand.empty()) return 0.0;
  double log_p = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const double total = cand.size() >= n ? static_cast<double>(cand.size() - n + 1) : 0.0;
    std::set<std::vector<std::string>> seen;
    double matched = 0.0;
    for (std::size_t i = 0; i + n <= cand.size(); ++i) {
      std::vector<std::string> g(cand.begin() + i, cand.begin() + i + n);
      if (!seen.insert(g).second) continue;
      matched += static_cast<double>(std::min(count_occurrences(cand, g), count_occurrences(ref, g)));
    }
    double p;
    if (matched > 0) p = matched / total;
    else if (n == 1) p = 1e-15 / total;
    else p = 1.0 / (total + 1.0);
    log_p += std::log(p) / 4.0;
  }
  const double c = static_cast<double>(cand.size()), r = static_cast<double>(ref.size());
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return std::min(100.0, 100.0 * bp * std::exp(log_p));
}

struct WilcoxonExact {
  double w_plus = 0.0;
  std::size_t n = 0;
  double p = 1.0;
};

// One-sided (x > y) signed-rank p by enumerating all 2^n sign patterns.
inline WilcoxonExact wilcoxon_enumerate(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] - y[i] != 0.0) d.push_back(x[i] - y[i]);
  }
  const std::size_t n = d.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double below = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++below;
      else if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank[i] = below + (equal + 1.0) / 2.0;
  }
  WilcoxonExact out;
  out.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) out.w_plus += rank[i];
  }
  std::uint64_t hits = 0;
  const std::uint64_t patterns = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) w += rank[i];
    }
    hits += w >= out.w_plus - 1e-9;
  }
  out.p = static_cast<double>(hits) / static_cast<double>(patterns);
  return out;
}

// Average linkage recomputed from scratch at every step; clusters are kept
// ordered by lowest member so (i, j) ties resolve the same way.
inline std::vector<std::size_t> average_linkage(const std::vector<std::vector<double>>& pts, std::size_t k,
                                                std::vector<double>* merge_distances = nullptr) {
  const std::size_t n = pts.size();
  auto cosd = [&](std::size_t a, std::size_t b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t t = 0; t < pts[a].size(); ++t) {
      dot += pts[a][t] * pts[b][t];
      na += pts[a][t] * pts[a][t];
      nb += pts[b][t] * pts[b][t];
    }
    return 1.0 - dot / std::sqrt(na * nb);
  };
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
  while (clusters.size() > k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double s = 0;
        for (auto a : clusters[i]) {
          for (auto b : clusters[j]) s += cosd(a, b);
        }
        s /= static_cast<double>(clusters[i].size() * clusters[j].size());
        if (s < best) {
          best = s;
          bi = i;
          bj = j;
        }
      }
    }
    if (merge_distances) merge_distances->push_back(best);
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(clusters[bi].begin(), clusters[bi].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (auto m : clusters[c]) assignment[m] = c;
  }
  return assignment;
}

// c-TF-IDF straight from the formula, one (cluster, term) cell at a time.
inline double ctfidf_cell(const std::vector<std::size_t>& assignment, std::size_t k,
                          const std::vector<std::vector<std::string>>& docs, std::size_t cluster,
                          const std::string& term) {
  double tf = 0, f = 0, tokens = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (const auto& t : docs[i]) {
      tokens += 1;
      if (t == term) {
        f += 1;
        if (assignment[i] == cluster) tf += 1;
      }
    }
  }
  if (tf == 0) return 0.0;
  const double a = tokens / static_cast<double>(k);
  return tf * std::log(1.0 + a / f);
}

// NPMI of two terms from raw document counts.
inline double npmi(const std::vector<std::vector<std::string>>& docs, const std::string& x, const std::string& y) {
  double nx = 0, ny = 0, nxy = 0;
  for (const auto& d : docs) {
    const bool hx = std::find(d.begin(), d.end(), x) != d.end();
    const bool hy = std::find(d.begin(), d.end(), y) != d.end();
    nx += hx;
    ny += hy;
    nxy += hx && hy;
  }
  const double n = static_cast<double>(docs.size());
  if (nxy == 0) return -1.0;
  if (nxy == n) return 1.0;
  const double pxy = nxy / n;
  return std::log(pxy / ((nx / n) * (ny / n))) / -std::log(pxy);
}

}  // namespace crclean::oracle
