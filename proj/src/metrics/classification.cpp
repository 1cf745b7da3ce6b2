#include <sstream>

#include "crclean/metrics.hpp"
#include "crclean/text.hpp"

namespace crclean {

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> predicted) {
  if (gold.size() != predicted.size()) throw LengthMismatch(gold.size(), predicted.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == Label::valid;
    const bool p = predicted[i] == Label::valid;
    if (g && p) ++cm.tp;
    else if (!g && p) ++cm.fp;
    else if (g && !p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

ClassMetrics class_metrics(const ConfusionMatrix& cm_in, Label positive) {
  const ConfusionMatrix cm = positive == Label::valid ? cm_in : cm_in.swapped();
  ClassMetrics m;
  m.support = cm.tp + cm.fn;
  m.predicted_count = cm.tp + cm.fp;
  m.no_predictions = m.predicted_count == 0;
  m.no_support = m.support == 0;
  m.precision = m.no_predictions ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(m.predicted_count);
  m.recall = m.no_support ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(m.support);
  const double pr = m.precision + m.recall;
  m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  return m;
}

ClassMetrics weighted_metrics(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw InvalidArgument("weighted metrics need at least one evaluated pair");
  const ClassMetrics v = class_metrics(cm, Label::valid);
  const ClassMetrics n = class_metrics(cm, Label::noisy);
  const double wv = static_cast<double>(v.support) / static_cast<double>(total);
  const double wn = static_cast<double>(n.support) / static_cast<double>(total);
  ClassMetrics out;
  out.precision = v.precision * wv + n.precision * wn;
  out.recall = v.recall * wv + n.recall * wn;
  out.f1 = v.f1 * wv + n.f1 * wn;
  out.support = total;
  out.predicted_count = total;
  return out;
}

ClassificationReport classification_report(const ConfusionMatrix& cm) {
  return {cm, weighted_metrics(cm), class_metrics(cm, Label::valid), class_metrics(cm, Label::noisy)};
}

namespace {

Json metrics_json(const ClassMetrics& m) {
  return Json{{"precision", m.precision},
              {"recall", m.recall},
              {"f1", m.f1},
              {"support", m.support},
              {"predicted", m.predicted_count}};
}

std::string pct(double fraction) { return text::format_fixed(100.0 * fraction, 1); }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

Json to_json(const ClassificationReport& r) {
  return Json{{"confusion", Json{{"tp", r.matrix.tp}, {"fp", r.matrix.fp}, {"fn", r.matrix.fn}, {"tn", r.matrix.tn}}},
              {"overall", metrics_json(r.overall)},
              {"valid", metrics_json(r.valid)},
              {"noisy", metrics_json(r.noisy)}};
}

std::string format_classification_table(const ClassificationReport& r, const std::string& row_name) {
  std::ostringstream os;
  std::string name = row_name;
  const std::size_t name_width = std::max<std::size_t>(name.size(), 10);
  auto name_col = [&](std::string s) {
    s.resize(name_width, ' ');
    return s;
  };
  os << name_col("") << " | " << pad("Overall (weighted)", 20) << " | " << pad("Valid (" + std::to_string(r.valid.support) + ")", 27)
     << " | " << pad("Noisy (" + std::to_string(r.noisy.support) + ")", 27) << "\n";
  os << name_col("") << " | " << pad("Prec", 6) << pad("Rec", 7) << pad("F1", 7) << " | " << pad("Prec", 6)
     << pad("Rec", 7) << pad("F1", 7) << pad("#", 7) << " | " << pad("Prec", 6) << pad("Rec", 7) << pad("F1", 7)
     << pad("#", 7) << "\n";
  os << name_col(name) << " | " << pad(pct(r.overall.precision), 6) << pad(pct(r.overall.recall), 7)
     << pad(pct(r.overall.f1), 7) << " | " << pad(pct(r.valid.precision), 6) << pad(pct(r.valid.recall), 7)
     << pad(pct(r.valid.f1), 7) << pad(std::to_string(r.valid.predicted_count), 7) << " | "
     << pad(pct(r.noisy.precision), 6) << pad(pct(r.noisy.recall), 7) << pad(pct(r.noisy.f1), 7)
     << pad(std::to_string(r.noisy.predicted_count), 7) << "\n";
  return os.str();
}

}  // namespace crclean
