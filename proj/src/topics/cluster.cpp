#include <algorithm>
#include <cmath>
#include <limits>

#include "crclean/error.hpp"
#include "crclean/topics.hpp"

namespace crclean {
namespace {

// Condensed upper triangle, i < j.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * (n - 1) / 2) {}
  double& at(std::size_t i, std::size_t j) { return d_[offset(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return d_[offset(i, j)]; }

 private:
  std::size_t offset(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }
  std::size_t n_;
  std::vector<double> d_;
};

double norm(const Embedding& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) throw DimensionMismatch("embedding sizes differ");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  const double denom = norm(a) * norm(b);
  return denom == 0.0 ? 0.0 : dot / denom;
}

std::vector<std::vector<std::size_t>> Clustering::members() const {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
  return out;
}

Clustering cluster(const std::vector<Embedding>& embeddings, std::size_t k) {
  const std::size_t n = embeddings.size();
  if (k == 0 || k > n) throw TooFewPoints(n, k);
  const std::size_t dim = embeddings.front().size();
  for (const auto& e : embeddings) {
    if (e.size() != dim) throw DimensionMismatch("ragged embeddings");
  }

  std::vector<Embedding> unit(embeddings);
  for (auto& v : unit) {
    const double nv = norm(v);
    if (nv == 0.0) throw InvalidArgument("zero embedding vector");
    for (double& x : v) x /= nv;
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  DistanceMatrix dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < dim; ++t) dot += unit[i][t] * unit[j][t];
      dist.at(i, j) = 1.0 - dot;
    }
  }

  std::vector<std::size_t> size(n, 1);
  std::vector<bool> active(n, true);
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;

  // nn[i]: nearest active j > i (lowest j on ties), n when none.
  std::vector<std::size_t> nn(n, n);
  std::vector<double> nn_dist(n, kInf);
  auto refresh = [&](std::size_t i) {
    nn[i] = n;
    nn_dist[i] = kInf;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (active[j] && dist.at(i, j) < nn_dist[i]) {
        nn[i] = j;
        nn_dist[i] = dist.at(i, j);
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  Clustering out;
  out.k = k;
  for (std::size_t remaining = n; remaining > k; --remaining) {
    std::size_t a = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && nn[i] < n && (a == n || nn_dist[i] < nn_dist[a])) a = i;
    }
    const std::size_t b = nn[a];
    out.merge_distances.push_back(nn_dist[a]);

    const double sa = static_cast<double>(size[a]);
    const double sb = static_cast<double>(size[b]);
    active[b] = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (!active[r] || r == a) continue;
      dist.at(r, a) = (sa * dist.at(r, a) + sb * dist.at(r, b)) / (sa + sb);
    }
    size[a] += size[b];
    parent[b] = a;

    for (std::size_t r = 0; r < n; ++r) {
      if (!active[r]) continue;
      if (r == a || nn[r] == a || nn[r] == b) {
        refresh(r);
      } else if (r < a) {
        const double d = dist.at(r, a);
        if (d < nn_dist[r] || (d == nn_dist[r] && a < nn[r])) {
          nn[r] = a;
          nn_dist[r] = d;
        }
      }
    }
  }

  std::vector<std::size_t> label(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i]) label[i] = next++;
  }
  out.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = i;
    while (parent[root] != root) root = parent[root];
    out.assignment[i] = label[root];
  }

  out.centroids.assign(k, Embedding(dim, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = out.centroids[out.assignment[i]];
    for (std::size_t t = 0; t < dim; ++t) c[t] += unit[i][t];
  }
  for (auto& c : out.centroids) {
    const double nc = norm(c);
    if (nc > 0.0) {
      for (double& x : c) x /= nc;
    }
  }
  return out;
}

std::vector<std::size_t> representatives(const std::vector<std::size_t>& members,
                                         const std::vector<Embedding>& embeddings, const Embedding& centroid,
                                         std::size_t count) {
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(members.size());
  for (auto m : members) scored.emplace_back(cosine_similarity(embeddings.at(m), centroid), m);
  std::stable_sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scored.size() && i < count; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace crclean
