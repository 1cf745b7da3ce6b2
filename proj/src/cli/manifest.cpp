#include "crclean/manifest.hpp"
#include "crclean/hash.hpp"

namespace crclean {
namespace {

std::string recorded_path(const std::filesystem::path& p, const std::filesystem::path& out_dir) {
  if (out_dir.empty()) return p.generic_string();
  std::error_code ec;
  const auto abs_p = std::filesystem::weakly_canonical(p, ec);
  const auto abs_out = std::filesystem::weakly_canonical(out_dir, ec);
  if (ec) return p.generic_string();
  const auto rel = abs_p.lexically_relative(abs_out);
  if (rel.empty() || *rel.begin() == "..") return p.generic_string();
  return rel.generic_string();
}

}  // namespace

Json to_json(const Manifest& m, const std::filesystem::path& out_dir) {
  Json inputs = Json::array();
  for (const auto& p : m.inputs) {
    inputs.push_back(Json{{"path", recorded_path(p, out_dir)}, {"sha256", sha256_file(p)}});
  }
  Json outputs = Json::array();
  for (const auto& p : m.outputs) {
    outputs.push_back(Json{{"file", p.filename().generic_string()}, {"sha256", sha256_file(p)}});
  }
  return Json{{"tool", "crclean"},
              {"version", std::string(kToolVersion)},
              {"command", m.command},
              {"inputs", inputs},
              {"outputs", outputs},
              {"config", m.config},
              {"seed", m.seed},
              {"parameters", m.parameters}};
}

std::filesystem::path write_manifest(const std::filesystem::path& out_dir, const Manifest& m) {
  const auto path = out_dir / (m.command + ".manifest.json");
  jsonl::write_file_atomic(path, to_json(m, out_dir).dump(2) + "\n");
  return path;
}

}  // namespace crclean
