#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "crclean/error.hpp"
#include "crclean/topics.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crclean;
using Docs = std::vector<std::vector<std::string>>;

namespace {

Embedding noisy_axis(std::size_t axis, std::size_t dim, std::mt19937_64& rng, double spread = 0.05) {
  std::normal_distribution<double> n(0.0, spread);
  Embedding e(dim);
  for (auto& x : e) x = n(rng);
  e[axis] += 1.0;
  return e;
}

// Three word groups, twelve documents each; document texts only use their
// group's vocabulary, embeddings sit on the group's axis.
struct ThreeGroups {
  std::vector<std::string> ids, texts;
  std::vector<Embedding> embeddings;
};

ThreeGroups three_groups() {
  const std::vector<std::vector<std::string>> vocab{
      {"null", "check", "pointer", "guard"}, {"rename", "variable", "naming", "clearer"},
      {"test", "coverage", "assert", "case"}};
  std::mt19937_64 rng(11);
  ThreeGroups g;
  for (std::size_t i = 0; i < 36; ++i) {
    const std::size_t grp = i % 3;
    std::string t;
    for (std::size_t w = 0; w < 4; ++w) {
      if (w == (i / 3) % 4) continue;  // each document drops one word
      t += vocab[grp][w] + " ";
    }
    g.ids.push_back("d" + std::to_string(i));
    g.texts.push_back(t + "please");
    g.embeddings.push_back(noisy_axis(grp, 8, rng));
  }
  return g;
}

}  // namespace

TEST_SUITE("topics") {

TEST_CASE("k = n keeps singletons, k = 1 merges everything") {
  std::mt19937_64 rng(1);
  std::vector<Embedding> pts;
  for (int i = 0; i < 7; ++i) pts.push_back(noisy_axis(static_cast<std::size_t>(i % 3), 4, rng, 0.3));
  auto all = cluster(pts, 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(all.assignment[i] == i);
  CHECK(all.merge_distances.empty());
  auto one = cluster(pts, 1);
  for (auto a : one.assignment) CHECK(a == 0);
  CHECK(one.merge_distances.size() == 6);
  CHECK_THROWS_AS(cluster(pts, 0), TooFewPoints);
  CHECK_THROWS_AS(cluster(pts, 8), TooFewPoints);
  pts[3].push_back(1.0);
  CHECK_THROWS_AS(cluster(pts, 2), DimensionMismatch);
}

TEST_CASE("two interleaved blobs separate") {
  std::mt19937_64 rng(2);
  std::vector<Embedding> pts;
  for (std::size_t i = 0; i < 12; ++i) pts.push_back(noisy_axis(i % 2, 5, rng));
  auto c = cluster(pts, 2);
  for (std::size_t i = 0; i < 12; ++i) CHECK(c.assignment[i] == i % 2);
  for (std::size_t j = 0; j < 2; ++j) {
    double norm = 0;
    for (double x : c.centroids[j]) norm += x * x;
    CHECK(norm == doctest::Approx(1.0));
    CHECK(c.centroids[j][j] > 0.99);
  }
  auto m = c.members();
  CHECK(m[0].size() == 6);
  CHECK(m[0].front() == 0);
}

TEST_CASE("clustering equals the brute-force linkage") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t count = 3 + rng() % 18, dim = 2 + rng() % 5, k = 1 + rng() % count;
    std::vector<Embedding> pts(count, Embedding(dim));
    for (auto& p : pts) {
      for (auto& x : p) x = n(rng);
    }
    std::vector<double> oracle_merges;
    auto want = oracle::average_linkage(pts, k, &oracle_merges);
    auto got = cluster(pts, k);
    CHECK(got.assignment == want);
    REQUIRE(got.merge_distances.size() == oracle_merges.size());
    for (std::size_t i = 0; i < oracle_merges.size(); ++i) {
      CHECK(got.merge_distances[i] == doctest::Approx(oracle_merges[i]).epsilon(1e-9));
    }
    // Average linkage never produces inversions.
    for (std::size_t i = 1; i < got.merge_distances.size(); ++i) {
      CHECK(got.merge_distances[i] >= got.merge_distances[i - 1] - 1e-12);
    }
  }
}

TEST_CASE("zero vectors are rejected") {
  std::vector<Embedding> pts{{1, 0}, {0, 0}};
  CHECK_THROWS_AS(cluster(pts, 1), InvalidArgument);
}

TEST_CASE("c-TF-IDF") {
  Docs docs{{"x", "x", "x"}, {"y", "y", "y"}};
  auto w = ctfidf({0, 1}, 2, docs);
  CHECK(w[0].at("x") == doctest::Approx(3 * std::log(2.0)));
  CHECK(w[0].count("y") == 0);

  std::mt19937_64 rng(4);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + rng() % 4;
    Docs d(10);
    std::vector<std::size_t> assignment(10);
    for (std::size_t i = 0; i < 10; ++i) {
      assignment[i] = i < k ? i : rng() % k;
      for (std::size_t t = 0; t < 1 + rng() % 6; ++t) d[i].push_back(vocab[rng() % vocab.size()]);
    }
    auto got = ctfidf(assignment, k, d);
    for (std::size_t c = 0; c < k; ++c) {
      for (const auto& term : vocab) {
        const double want = oracle::ctfidf_cell(assignment, k, d, c, term);
        const double have = got[c].count(term) ? got[c].at(term) : 0.0;
        CHECK(std::abs(have - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("top terms break ties alphabetically") {
  TermWeights w{{"b", 1.0}, {"a", 1.0}, {"c", 2.0}, {"d", 0.5}};
  CHECK(top_terms(w, 3) == std::vector<std::string>{"c", "a", "b"});
  CHECK(top_terms(w, 10).size() == 4);
}

TEST_CASE("representatives") {
  std::vector<Embedding> e{{1, 0}, {0.6, 0.8}, {0.8, 0.6}, {1, 0}, {0, 1}};
  CHECK(representatives({0, 1, 2, 3, 4}, e, {1, 0}) == std::vector<std::size_t>{0, 3, 2});
  CHECK(representatives({4, 1}, e, {1, 0}) == std::vector<std::size_t>{1, 4});
}

TEST_CASE("npmi") {
  CHECK(npmi(3, 3, 3, 3) == 1.0);
  CHECK(npmi(2, 2, 0, 4) == -1.0);
  CHECK(npmi(2, 2, 2, 4) == doctest::Approx(1.0));
  Docs docs{{"a", "b"}, {"a", "b", "c"}, {"a"}, {"c"}, {"b", "c"}, {"d"}};
  for (const auto& [x, y] : std::vector<std::pair<std::string, std::string>>{
           {"a", "b"}, {"a", "c"}, {"b", "c"}, {"a", "d"}, {"c", "d"}}) {
    std::size_t dx = 0, dy = 0, dxy = 0;
    for (const auto& d : docs) {
      const bool hx = std::count(d.begin(), d.end(), x) > 0, hy = std::count(d.begin(), d.end(), y) > 0;
      dx += hx;
      dy += hy;
      dxy += hx && hy;
    }
    const double v = npmi(dx, dy, dxy, docs.size());
    CHECK(v == doctest::Approx(oracle::npmi(docs, x, y)).epsilon(1e-12));
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("coherence flags clusters with fewer than two terms") {
  Docs docs{{"a", "b"}, {"a"}, {"b", "c"}};
  auto r = coherence({{"a", "b"}, {"c"}, {}}, docs);
  CHECK(r.per_cluster[0].score.has_value());
  CHECK(r.per_cluster[1].insufficient_terms);
  CHECK(r.per_cluster[2].insufficient_terms);
  CHECK(r.mean == *r.per_cluster[0].score);
  CHECK(std::isnan(coherence({{"a"}}, docs).mean));
}

TEST_CASE("topic model: true grouping is more coherent than a merged one") {
  const auto g = three_groups();
  TopicOptions three{3, 4, 3}, two{2, 4, 3};
  auto m3 = build_topic_model(g.ids, g.texts, g.embeddings, three);
  auto m2 = build_topic_model(g.ids, g.texts, g.embeddings, two);
  REQUIRE(m3.clusters.size() == 3);
  for (std::size_t i = 0; i < 36; ++i) CHECK(m3.assignment[i] == i % 3);
  CHECK(m3.clusters[0].top_terms.size() == 4);
  CHECK(std::count(m3.clusters[0].top_terms.begin(), m3.clusters[0].top_terms.end(), "please") == 0);
  CHECK(m3.mean_coherence > m2.mean_coherence);
  CHECK(m3.clusters[1].representatives.size() == 3);

  auto back = topic_model_from_json(to_json(m3));
  CHECK(to_json(back) == to_json(m3));
  CHECK_THROWS_AS(topic_model_from_json(Json{{"k", 3}}), IoError);
}

TEST_CASE("topic terms drop stopwords and punctuation") {
  CHECK(topic_terms("Why is this null, again?") == std::vector<std::string>{"null"});
}

TEST_CASE("score propagation") {
  const auto g = three_groups();
  auto model = build_topic_model(g.ids, g.texts, g.embeddings, TopicOptions{3, 4, 2});
  std::map<std::string, std::string> texts;
  for (std::size_t i = 0; i < g.ids.size(); ++i) texts[g.ids[i]] = g.texts[i];
  auto sheet = annotation_sheet(model, texts);
  REQUIRE(sheet.size() == 6);
  CHECK_THROWS_AS(propagate_scores(model, sheet), MissingAnnotation);

  // Cluster 0 gets {2, 4} -> 3.0; others constant.
  for (auto& a : sheet) {
    a.information = a.cluster == 0 ? (a.representative_id == sheet[0].representative_id ? 2 : 4) : 5;
    a.relevance = a.cluster == 2 ? 1 : 3;
  }
  auto q = propagate_scores(model, sheet);
  CHECK(q.clusters[0].information == 3.0);
  CHECK(q.information == doctest::Approx((12 * 3.0 + 24 * 5.0) / 36));
  CHECK(q.relevance == doctest::Approx((24 * 3.0 + 12 * 1.0) / 36));

  auto reversed = sheet;
  std::reverse(reversed.begin(), reversed.end());
  auto q2 = propagate_scores(model, reversed);
  CHECK(q2.information == q.information);
  CHECK(q2.relevance == q.relevance);

  testing::TempDir dir;
  write_annotations(dir / "a.jsonl", sheet);
  auto read = read_annotations(dir / "a.jsonl");
  CHECK(propagate_scores(model, read).information == q.information);

  sheet[1].information = 6;
  CHECK_THROWS_AS(propagate_scores(model, sheet), InvalidArgument);
  sheet[1].information = 4;
  sheet[1].relevance = 0;
  CHECK_THROWS_AS(propagate_scores(model, sheet), InvalidArgument);
  CHECK(format_quality_table(q, model).find("3.00") != std::string::npos);
}

}  // TEST_SUITE
