#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crclean/jsonl.hpp"

namespace crclean {

using Embedding = std::vector<double>;

struct Clustering {
  std::size_t k = 0;
  /// Cluster id per input point. Ids are ordered by each cluster's lowest
  /// member index, so cluster 0 always holds point 0.
  std::vector<std::size_t> assignment;
  std::vector<Embedding> centroids;    // member mean, re-normalized
  std::vector<double> merge_distances;  // linkage distance of each merge, in order

  std::vector<std::vector<std::size_t>> members() const;
};

/// Average-linkage agglomerative clustering over cosine distance, merging
/// from singletons until k clusters remain. Equal distances merge the pair
/// with the lowest (i, j) cluster indices first. Throws TooFewPoints when
/// k is 0 or exceeds the point count, DimensionMismatch on ragged input.
Clustering cluster(const std::vector<Embedding>& embeddings, std::size_t k);

double cosine_similarity(const Embedding& a, const Embedding& b);

using TermWeights = std::map<std::string, double>;

/// Class-based TF-IDF: tf(t,c) * ln(1 + A / f(t)) with A the mean token
/// count per cluster. Terms absent from a cluster are not stored.
std::vector<TermWeights> ctfidf(const std::vector<std::size_t>& assignment, std::size_t k,
                                const std::vector<std::vector<std::string>>& documents);

/// Highest-weighted terms, ties broken alphabetically.
std::vector<std::string> top_terms(const TermWeights& weights, std::size_t n = 10);

/// Up to `count` member indices most similar to the centroid; equal
/// similarities keep input order.
std::vector<std::size_t> representatives(const std::vector<std::size_t>& members,
                                         const std::vector<Embedding>& embeddings, const Embedding& centroid,
                                         std::size_t count = 3);

/// NPMI from document frequencies over `n_docs` documents. A pair that never
/// co-occurs scores -1; a pair present in every document scores 1.
double npmi(std::size_t df_x, std::size_t df_y, std::size_t df_xy, std::size_t n_docs);

struct ClusterCoherence {
  std::optional<double> score;  // empty when insufficient_terms
  bool insufficient_terms = false;
};

struct CoherenceReport {
  std::vector<ClusterCoherence> per_cluster;
  double mean = 0.0;  // over clusters with a score; NaN if none
};

/// Mean pairwise NPMI of each cluster's terms, with document-level
/// co-occurrence over `documents`. Clusters with fewer than two terms are
/// flagged and left out of the mean.
CoherenceReport coherence(const std::vector<std::vector<std::string>>& terms_per_cluster,
                          const std::vector<std::vector<std::string>>& documents);

struct TopicOptions {
  std::size_t k = 50;
  std::size_t top_terms = 10;
  std::size_t representatives = 3;
};

struct TopicCluster {
  std::size_t id = 0;
  std::size_t size = 0;
  Embedding centroid;
  TermWeights term_weights;
  std::vector<std::string> top_terms;
  std::vector<std::string> representatives;  // instance ids
  ClusterCoherence coherence;
};

struct TopicModel {
  std::size_t k = 0;
  std::vector<std::string> ids;
  std::vector<std::size_t> assignment;
  std::vector<TopicCluster> clusters;
  double mean_coherence = 0.0;

  std::size_t size() const noexcept { return ids.size(); }
};

/// Terms for c-TF-IDF and coherence: lowercased word tokens with stopwords
/// and punctuation removed.
std::vector<std::string> topic_terms(const std::string& text);

/// `embeddings[i]` belongs to `ids[i]` and `texts[i]`.
TopicModel build_topic_model(const std::vector<std::string>& ids, const std::vector<std::string>& texts,
                             const std::vector<Embedding>& embeddings, const TopicOptions& options);

Json to_json(const TopicModel& model);
TopicModel topic_model_from_json(const Json& j);

struct Annotation {
  std::size_t cluster = 0;
  std::string representative_id;
  std::string text;
  std::optional<int> information;  // 1..5
  std::optional<int> relevance;    // 1..3
};

/// One blank annotation row per representative, cluster by cluster.
std::vector<Annotation> annotation_sheet(const TopicModel& model, const std::map<std::string, std::string>& texts);
void write_annotations(const std::filesystem::path& path, const std::vector<Annotation>& rows);
std::vector<Annotation> read_annotations(const std::filesystem::path& path);

struct ClusterQuality {
  std::size_t cluster = 0;
  std::size_t size = 0;
  double information = 0.0;
  double relevance = 0.0;
};

struct QualityScores {
  std::vector<ClusterQuality> clusters;
  double information = 0.0;  // cluster-size-weighted
  double relevance = 0.0;
};

/// Cluster score = mean over its annotated representatives; overall = size
/// weighted mean. Throws MissingAnnotation when a representative lacks
/// either score, InvalidArgument for out-of-range scores.
QualityScores propagate_scores(const TopicModel& model, const std::vector<Annotation>& annotations);

Json to_json(const QualityScores& q);
std::string format_quality_table(const QualityScores& q, const TopicModel& model);

}  // namespace crclean
