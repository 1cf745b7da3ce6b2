#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "crclean/bleu.hpp"
#include "crclean/error.hpp"
#include "crclean/text.hpp"
#include "crclean/topics.hpp"

namespace crclean {

std::vector<std::string> topic_terms(const std::string& text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text, StopwordMode::drop_stopwords).tokens) {
    const bool has_word = std::any_of(t.begin(), t.end(), [](char c) { return !text::is_punct(c) && !text::is_space(c); });
    if (has_word) out.push_back(std::move(t));
  }
  return out;
}

TopicModel build_topic_model(const std::vector<std::string>& ids, const std::vector<std::string>& texts,
                             const std::vector<Embedding>& embeddings, const TopicOptions& options) {
  if (ids.size() != texts.size() || ids.size() != embeddings.size()) {
    throw DimensionMismatch("ids, texts and embeddings differ in length");
  }
  std::set<std::string> unique(ids.begin(), ids.end());
  if (unique.size() != ids.size()) throw InvalidArgument("duplicate instance ids");

  const Clustering clustering = cluster(embeddings, options.k);
  std::vector<std::vector<std::string>> docs;
  docs.reserve(texts.size());
  for (const auto& t : texts) docs.push_back(topic_terms(t));
  const auto weights = ctfidf(clustering.assignment, clustering.k, docs);
  const auto members = clustering.members();

  TopicModel model;
  model.k = clustering.k;
  model.ids = ids;
  model.assignment = clustering.assignment;
  std::vector<std::vector<std::string>> terms;
  for (std::size_t c = 0; c < clustering.k; ++c) {
    TopicCluster tc;
    tc.id = c;
    tc.size = members[c].size();
    tc.centroid = clustering.centroids[c];
    tc.term_weights = weights[c];
    tc.top_terms = top_terms(weights[c], options.top_terms);
    for (auto m : representatives(members[c], embeddings, tc.centroid, options.representatives)) {
      tc.representatives.push_back(ids[m]);
    }
    terms.push_back(tc.top_terms);
    model.clusters.push_back(std::move(tc));
  }
  const auto coh = coherence(terms, docs);
  for (std::size_t c = 0; c < clustering.k; ++c) model.clusters[c].coherence = coh.per_cluster[c];
  model.mean_coherence = coh.mean;
  return model;
}

Json to_json(const TopicModel& model) {
  Json clusters = Json::array();
  for (const auto& c : model.clusters) {
    Json weights = Json::object();
    for (const auto& [t, w] : c.term_weights) weights[t] = w;
    Json j{{"id", c.id},
           {"size", c.size},
           {"centroid", c.centroid},
           {"term_weights", weights},
           {"top_terms", c.top_terms},
           {"representatives", c.representatives},
           {"insufficient_terms", c.coherence.insufficient_terms}};
    j["coherence"] = c.coherence.score ? Json(*c.coherence.score) : Json(nullptr);
    clusters.push_back(std::move(j));
  }
  Json assignment = Json::array();
  for (std::size_t i = 0; i < model.ids.size(); ++i) {
    assignment.push_back(Json{{"id", model.ids[i]}, {"cluster", model.assignment[i]}});
  }
  return Json{{"k", model.k},
              {"mean_coherence", std::isnan(model.mean_coherence) ? Json(nullptr) : Json(model.mean_coherence)},
              {"clusters", clusters},
              {"assignment", assignment}};
}

TopicModel topic_model_from_json(const Json& j) {
  TopicModel m;
  try {
    m.k = j.at("k").get<std::size_t>();
    m.mean_coherence = j.at("mean_coherence").is_null() ? std::nan("") : j.at("mean_coherence").get<double>();
    for (const auto& a : j.at("assignment")) {
      m.ids.push_back(a.at("id").get<std::string>());
      m.assignment.push_back(a.at("cluster").get<std::size_t>());
    }
    for (const auto& c : j.at("clusters")) {
      TopicCluster tc;
      tc.id = c.at("id").get<std::size_t>();
      tc.size = c.at("size").get<std::size_t>();
      tc.centroid = c.at("centroid").get<Embedding>();
      for (const auto& [t, w] : c.at("term_weights").items()) tc.term_weights[t] = w.get<double>();
      tc.top_terms = c.at("top_terms").get<std::vector<std::string>>();
      tc.representatives = c.at("representatives").get<std::vector<std::string>>();
      tc.coherence.insufficient_terms = c.value("insufficient_terms", false);
      if (!c.at("coherence").is_null()) tc.coherence.score = c.at("coherence").get<double>();
      m.clusters.push_back(std::move(tc));
    }
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed topic model: ") + e.what());
  }
  if (m.clusters.size() != m.k) throw IoError("malformed topic model: cluster count differs from k");
  for (std::size_t c = 0; c < m.k; ++c) {
    if (m.clusters[c].id != c) throw IoError("malformed topic model: clusters out of order");
  }
  for (auto a : m.assignment) {
    if (a >= m.k) throw IoError("malformed topic model: assignment out of range");
  }
  return m;
}

std::vector<Annotation> annotation_sheet(const TopicModel& model, const std::map<std::string, std::string>& texts) {
  std::vector<Annotation> rows;
  for (const auto& c : model.clusters) {
    for (const auto& id : c.representatives) {
      Annotation a;
      a.cluster = c.id;
      a.representative_id = id;
      if (auto it = texts.find(id); it != texts.end()) a.text = it->second;
      rows.push_back(std::move(a));
    }
  }
  return rows;
}

void write_annotations(const std::filesystem::path& path, const std::vector<Annotation>& rows) {
  std::vector<Json> records;
  for (const auto& a : rows) {
    records.push_back(Json{{"cluster", a.cluster},
                           {"representative_id", a.representative_id},
                           {"text", a.text},
                           {"information", a.information ? Json(*a.information) : Json(nullptr)},
                           {"relevance", a.relevance ? Json(*a.relevance) : Json(nullptr)}});
  }
  jsonl::write_records(path, records);
}

std::vector<Annotation> read_annotations(const std::filesystem::path& path) {
  std::vector<Annotation> rows;
  for (const auto& r : jsonl::read_records(path)) {
    try {
      Annotation a;
      a.cluster = r.at("cluster").get<std::size_t>();
      a.representative_id = r.at("representative_id").get<std::string>();
      a.text = r.value("text", std::string());
      if (r.contains("information") && !r["information"].is_null()) a.information = r["information"].get<int>();
      if (r.contains("relevance") && !r["relevance"].is_null()) a.relevance = r["relevance"].get<int>();
      rows.push_back(std::move(a));
    } catch (const Json::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  return rows;
}

QualityScores propagate_scores(const TopicModel& model, const std::vector<Annotation>& annotations) {
  std::map<std::pair<std::size_t, std::string>, const Annotation*> index;
  for (const auto& a : annotations) {
    if (a.information && (*a.information < 1 || *a.information > 5)) {
      throw InvalidArgument("information score out of range 1-5 for " + a.representative_id);
    }
    if (a.relevance && (*a.relevance < 1 || *a.relevance > 3)) {
      throw InvalidArgument("relevance score out of range 1-3 for " + a.representative_id);
    }
    index[{a.cluster, a.representative_id}] = &a;
  }

  QualityScores q;
  std::size_t n = 0;
  for (const auto& c : model.clusters) {
    if (c.representatives.empty()) throw MissingAnnotation(c.id);
    double info = 0.0, rel = 0.0;
    for (const auto& id : c.representatives) {
      auto it = index.find({c.id, id});
      if (it == index.end() || !it->second->information || !it->second->relevance) throw MissingAnnotation(c.id);
      info += *it->second->information;
      rel += *it->second->relevance;
    }
    const double r = static_cast<double>(c.representatives.size());
    q.clusters.push_back({c.id, c.size, info / r, rel / r});
    q.information += info / r * static_cast<double>(c.size);
    q.relevance += rel / r * static_cast<double>(c.size);
    n += c.size;
  }
  if (n > 0) {
    q.information /= static_cast<double>(n);
    q.relevance /= static_cast<double>(n);
  }
  return q;
}

Json to_json(const QualityScores& q) {
  Json clusters = Json::array();
  for (const auto& c : q.clusters) {
    clusters.push_back(
        Json{{"cluster", c.cluster}, {"size", c.size}, {"information", c.information}, {"relevance", c.relevance}});
  }
  return Json{{"information", q.information}, {"relevance", q.relevance}, {"clusters", clusters}};
}

std::string format_quality_table(const QualityScores& q, const TopicModel& model) {
  std::ostringstream os;
  os << "cluster  size  info  rel   coherence  top terms\n";
  for (const auto& c : q.clusters) {
    const auto& tc = model.clusters.at(c.cluster);
    std::string terms;
    for (std::size_t i = 0; i < tc.top_terms.size() && i < 5; ++i) terms += (i ? " " : "") + tc.top_terms[i];
    char line[96];
    std::snprintf(line, sizeof line, "%7zu %5zu %5s %5s %10s  ", c.cluster, c.size,
                  text::format_fixed(c.information, 2).c_str(), text::format_fixed(c.relevance, 2).c_str(),
                  tc.coherence.score ? text::format_fixed(*tc.coherence.score, 3).c_str() : "-");
    os << line << terms << "\n";
  }
  os << "overall information " << text::format_fixed(q.information, 2) << ", relevance "
     << text::format_fixed(q.relevance, 2) << ", mean coherence "
     << (std::isnan(model.mean_coherence) ? std::string("-") : text::format_fixed(model.mean_coherence, 3)) << "\n";
  return os.str();
}

}  // namespace crclean
