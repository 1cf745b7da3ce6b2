#include "crclean/error.hpp"
#include "crclean/gateway.hpp"
#include "crclean/jsonl.hpp"

namespace crclean {

Json to_json(const Prediction& p) {
  Json j{{"id", p.id},
         {"label", p.label ? Json(std::string(to_string(*p.label))) : Json(nullptr)},
         {"raw", p.raw_response},
         {"model", p.model},
         {"prompt_variant", p.prompt_variant},
         {"fingerprint", p.prompt_fingerprint}};
  if (!p.error.empty()) j["error"] = p.error;
  return j;
}

Prediction prediction_from_json(const Json& j) {
  try {
    Prediction p;
    p.id = j.at("id").get<std::string>();
    if (const auto& l = j.at("label"); !l.is_null()) {
      auto parsed = parse_label(l.get<std::string>());
      if (!parsed) throw Error("prediction " + p.id + ": unknown label");
      p.label = *parsed;
    }
    p.raw_response = j.value("raw", std::string{});
    p.model = j.value("model", std::string{});
    p.prompt_variant = j.value("prompt_variant", std::string{});
    p.prompt_fingerprint = j.value("fingerprint", std::string{});
    p.error = j.value("error", std::string{});
    if (!p.label && p.error.empty()) p.error = "unlabeled";
    return p;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed prediction record: ") + e.what());
  }
}

void write_predictions(const std::filesystem::path& path, const std::vector<Prediction>& predictions) {
  std::string buf;
  for (const auto& p : predictions) buf += jsonl::dump_line(to_json(p));
  jsonl::write_file_atomic(path, buf);
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  for (const auto& rec : jsonl::read_records(path)) out.push_back(prediction_from_json(rec));
  return out;
}

}  // namespace crclean
