#include <unistd.h>
#include <termios.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "crclean/annotate.hpp"
#include "crclean/bleu.hpp"
#include "crclean/cleaning.hpp"
#include "crclean/cli.hpp"
#include "crclean/config.hpp"
#include "crclean/error.hpp"
#include "crclean/manifest.hpp"
#include "crclean/metrics.hpp"
#include "crclean/text.hpp"
#include "crclean/topics.hpp"

namespace crclean {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<unsigned> parallelism;
  bool trace = false;
};

struct Context {
  RunConfig cfg;
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

RunConfig resolve_config(const Globals& g) {
  RunConfig c = g.config.empty() ? config_from_json(Json::object(), fs::current_path()) : load_config(g.config);
  if (g.seed) c.seed = *g.seed;
  if (g.parallelism) {
    if (*g.parallelism == 0) throw ConfigError("--parallelism must be at least 1");
    c.parallelism = *g.parallelism;
  }
  c.trace = g.trace;
  c.out_dir = g.out;
  fs::create_directories(c.out_dir);
  return c;
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw IoError(p.string() + ": no such file");
}

Dataset load_dataset(const fs::path& path, const RunConfig& cfg) {
  require_file(path);
  auto parsed = parse_dataset_file(path, {cfg.fields, std::nullopt});
  if (!parsed.rejects.empty()) {
    const auto& r = parsed.rejects.front();
    throw IoError(path.string() + ":" + std::to_string(r.line) + ": " + r.reason + " (" +
                  std::to_string(parsed.rejects.size()) + " bad records; run ingest to separate them)");
  }
  return std::move(parsed.dataset);
}

Manifest manifest_for(const Context& ctx, std::string command) {
  Manifest m;
  m.command = std::move(command);
  m.config = ctx.cfg.raw;
  m.seed = ctx.cfg.seed;
  return m;
}

std::shared_ptr<Backend> make_backend(const Context& ctx) {
  if (ctx.cfg.backend == BackendKind::mock) return MockBackend::from_file(ctx.cfg.mock_rules);
  HttpBackend::Options opt;
  opt.endpoint = ctx.cfg.model.endpoint;
  opt.timeout = ctx.cfg.model.timeout;
  if (auto key = process_env(ctx.cfg.model.api_key_env)) {
    opt.api_key = *key;
  } else {
    ctx.err << "warning: " << ctx.cfg.model.api_key_env << " is not set, sending requests without a key\n";
  }
  if (ctx.cfg.trace) opt.trace = &ctx.err;
  return std::make_shared<HttpBackend>(std::move(opt));
}

std::shared_ptr<ResponseCache> make_cache(const Context& ctx) {
  const fs::path path = ctx.cfg.cache_path.empty() ? ctx.cfg.out_dir / "responses.cache.jsonl" : ctx.cfg.cache_path;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  return std::make_shared<ResponseCache>(path);
}

Gateway make_gateway(const Context& ctx) {
  Gateway::Options opt;
  opt.log = &ctx.err;
  return Gateway(make_backend(ctx), make_cache(ctx), opt);
}

ErrorPolicy parse_error_policy(const std::string& s) {
  if (s == "noisy") return ErrorPolicy::as_noisy;
  if (s == "valid") return ErrorPolicy::as_valid;
  throw ConfigError("--error-policy must be noisy or valid");
}

std::string id_string(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

// Gold labels from any record file carrying an id and a label.
std::vector<std::pair<std::string, Label>> read_gold(const fs::path& path, const RunConfig& cfg) {
  require_file(path);
  std::vector<std::pair<std::string, Label>> out;
  std::size_t line = 0;
  for (const auto& r : jsonl::read_records(path)) {
    ++line;
    const Json* id = r.contains(cfg.fields.id) ? &r.at(cfg.fields.id) : (r.contains("id") ? &r.at("id") : nullptr);
    const Json* label =
        r.contains(cfg.fields.label) ? &r.at(cfg.fields.label) : (r.contains("label") ? &r.at("label") : nullptr);
    if (!id || !label || !label->is_string()) {
      throw IoError(path.string() + ":" + std::to_string(line) + ": record needs an id and a gold label");
    }
    auto l = parse_label(label->get<std::string>());
    if (!l) {
      throw IoError(path.string() + ":" + std::to_string(line) + ": unknown label '" + label->get<std::string>() + "'");
    }
    out.emplace_back(id_string(*id), *l);
  }
  return out;
}

std::string write_json_file(const fs::path& path, const Json& j) {
  jsonl::write_file_atomic(path, j.dump(2) + "\n");
  return path.string();
}

// Keys straight from the terminal when stdin is one, otherwise characters
// from the stream (so piped and scripted sessions work the same way).
class KeyReader {
 public:
  explicit KeyReader(std::istream& in) : in_(in) {
    if (&in == &std::cin && isatty(STDIN_FILENO) && tcgetattr(STDIN_FILENO, &saved_) == 0) {
      termios raw = saved_;
      raw.c_lflag &= static_cast<tcflag_t>(~(ICANON | ECHO));
      raw.c_cc[VMIN] = 1;
      raw.c_cc[VTIME] = 0;
      raw_ = tcsetattr(STDIN_FILENO, TCSANOW, &raw) == 0;
    }
  }
  ~KeyReader() {
    if (raw_) tcsetattr(STDIN_FILENO, TCSANOW, &saved_);
  }
  KeyReader(const KeyReader&) = delete;
  KeyReader& operator=(const KeyReader&) = delete;

  int operator()() {
    if (raw_) {
      unsigned char c;
      return ::read(STDIN_FILENO, &c, 1) == 1 ? c : EOF;
    }
    return in_.get();
  }

 private:
  std::istream& in_;
  termios saved_{};
  bool raw_ = false;
};

// ---- commands -------------------------------------------------------------

struct IngestArgs {
  std::string input;
  std::string default_split;
};

int cmd_ingest(Context& ctx, const IngestArgs& a) {
  require_file(a.input);
  ParseOptions opt{ctx.cfg.fields, std::nullopt};
  if (!a.default_split.empty()) {
    opt.default_split = parse_split(a.default_split);
    if (!opt.default_split) throw ConfigError("unknown split '" + a.default_split + "'");
  }
  const auto parsed = parse_dataset_file(a.input, opt);
  const auto dataset_path = ctx.cfg.out_dir / "dataset.jsonl";
  const auto rejects_path = ctx.cfg.out_dir / "rejects.jsonl";
  const auto stats_path = ctx.cfg.out_dir / "ingest_stats.json";
  write_dataset_file(parsed.dataset, dataset_path, ctx.cfg.fields);
  {
    std::ostringstream os;
    write_rejects(parsed.rejects, os);
    jsonl::write_file_atomic(rejects_path, os.str());
  }
  const auto stats = dataset_stats(parsed.dataset);
  Json sj = to_json(stats);
  sj["rejected"] = parsed.rejects.size();
  sj["lines_read"] = parsed.lines_read;
  write_json_file(stats_path, sj);
  for (const auto& w : parsed.warnings) ctx.err << "warning: " << w << "\n";

  auto m = manifest_for(ctx, "ingest");
  m.inputs = {a.input};
  m.outputs = {dataset_path, rejects_path, stats_path};
  m.parameters = Json{{"default_split", a.default_split}};
  write_manifest(ctx.cfg.out_dir, m);

  ctx.out << format_stats_table(stats) << parsed.rejects.size() << " of " << parsed.lines_read
          << " lines rejected (see " << rejects_path.string() << ")\n";
  return 0;
}

struct SampleArgs {
  std::string input;
  std::size_t size = 0;
  std::string split;
};

int cmd_sample(Context& ctx, const SampleArgs& a) {
  Dataset ds = load_dataset(a.input, ctx.cfg);
  if (!a.split.empty()) {
    auto s = parse_split(a.split);
    if (!s) throw ConfigError("unknown split '" + a.split + "'");
    ds = ds.filter_split(*s);
  }
  const Dataset sample = sample_controlled(ds, a.size, ctx.cfg.seed);
  const auto path = ctx.cfg.out_dir / ("sample-seed" + std::to_string(ctx.cfg.seed) + ".jsonl");
  write_dataset_file(sample, path, ctx.cfg.fields);

  auto m = manifest_for(ctx, "sample");
  m.inputs = {a.input};
  m.outputs = {path};
  m.parameters = Json{{"size", a.size}, {"split", a.split}};
  write_manifest(ctx.cfg.out_dir, m);
  ctx.out << "sampled " << sample.size() << " of " << ds.size() << " instances into " << path.string() << "\n";
  return 0;
}

struct ClassifyArgs {
  std::string input;
  std::string split;
  std::string checkpoint;
  std::string output = "predictions.jsonl";
};

int cmd_classify(Context& ctx, const ClassifyArgs& a) {
  Dataset ds = load_dataset(a.input, ctx.cfg);
  if (!a.split.empty()) {
    auto s = parse_split(a.split);
    if (!s) throw ConfigError("unknown split '" + a.split + "'");
    ds = ds.filter_split(*s);
  }
  Gateway gw = make_gateway(ctx);
  const fs::path checkpoint =
      a.checkpoint.empty() ? ctx.cfg.out_dir / "classify.checkpoint.jsonl" : fs::path(a.checkpoint);
  std::vector<Prediction> preds;
  try {
    preds = gw.classify_batch(ds, ctx.cfg.prompt, ctx.cfg.model, ctx.cfg.parallelism, checkpoint);
  } catch (const TransportError&) {
    ctx.err << "classification stopped; completed predictions are kept in " << checkpoint.string()
            << " and a rerun resumes from there\n";
    throw;
  }
  const auto path = ctx.cfg.out_dir / a.output;
  write_predictions(path, preds);

  std::size_t errors = 0, valid = 0;
  for (const auto& p : preds) {
    errors += p.is_error();
    valid += p.label == Label::valid;
  }
  auto m = manifest_for(ctx, "classify");
  m.inputs = {a.input};
  m.outputs = {path};
  m.parameters = Json{{"split", a.split},
                      {"prompt_variant", ctx.cfg.prompt.variant_tag()},
                      {"model", ctx.cfg.model.model},
                      {"run", run_fingerprint(ctx.cfg.prompt, ctx.cfg.model)}};
  write_manifest(ctx.cfg.out_dir, m);

  ctx.out << preds.size() << " predictions (" << valid << " valid, " << preds.size() - valid - errors << " noisy, "
          << errors << " unparsable) written to " << path.string() << "\n";
  ctx.err << gw.backend_calls() << " backend requests, " << gw.cache_hits() << " cache hits\n";
  return 0;
}

struct CleanArgs {
  std::string input;
  std::string predictions;
  std::string error_policy = "noisy";
};

int cmd_clean(Context& ctx, const CleanArgs& a) {
  const Dataset ds = load_dataset(a.input, ctx.cfg);
  require_file(a.predictions);
  const auto preds = read_predictions(a.predictions);
  auto [cleaned, report] = apply_clean(ds, preds, parse_error_policy(a.error_policy));
  const auto path = ctx.cfg.out_dir / "cleaned.jsonl";
  const auto report_path = ctx.cfg.out_dir / "clean_report.json";
  write_dataset_file(cleaned, path, ctx.cfg.fields);
  write_json_file(report_path, to_json(report));

  auto m = manifest_for(ctx, "clean");
  m.inputs = {a.input, a.predictions};
  m.outputs = {path, report_path};
  m.parameters = Json{{"error_policy", a.error_policy}};
  write_manifest(ctx.cfg.out_dir, m);
  ctx.out << format_clean_report(report);
  return 0;
}

struct ControlArgs {
  std::string input;
  std::string cleaned;
  std::size_t size = 0;
};

int cmd_control(Context& ctx, const ControlArgs& a) {
  const Dataset ds = load_dataset(a.input, ctx.cfg);
  std::map<Split, std::size_t> targets;
  Dataset controlled;
  if (!a.cleaned.empty()) {
    const Dataset cleaned = load_dataset(a.cleaned, ctx.cfg);
    for (const auto& inst : cleaned) ++targets[inst.split];
    controlled = sample_controlled_per_split(ds, targets, ctx.cfg.seed);
  } else {
    controlled = sample_controlled(ds, a.size, ctx.cfg.seed);
  }
  const auto path = ctx.cfg.out_dir / ("controlled-seed" + std::to_string(ctx.cfg.seed) + ".jsonl");
  const auto report_path = ctx.cfg.out_dir / "control_report.json";
  write_dataset_file(controlled, path, ctx.cfg.fields);

  Json per_split = Json::object();
  for (const auto& [split, n] : dataset_stats(controlled).per_split) per_split[std::string(to_string(split))] = n;
  Json report{{"input_size", ds.size()}, {"controlled_size", controlled.size()}, {"seed", ctx.cfg.seed},
              {"per_split", per_split}};
  write_json_file(report_path, report);

  auto m = manifest_for(ctx, "control");
  m.inputs = {a.input};
  if (!a.cleaned.empty()) m.inputs.emplace_back(a.cleaned);
  m.outputs = {path, report_path};
  m.parameters = Json{{"size", a.cleaned.empty() ? Json(a.size) : Json(nullptr)}};
  write_manifest(ctx.cfg.out_dir, m);

  ctx.out << "controlled sample of " << controlled.size() << " from " << ds.size() << " (seed " << ctx.cfg.seed
          << ") written to " << path.string() << "\n";
  return 0;
}

struct EvalClassifyArgs {
  std::string gold;
  std::string predictions;
  bool all_valid = false;
  std::string name = "classifier";
  std::string error_policy = "noisy";
};

int cmd_eval_classify(Context& ctx, const EvalClassifyArgs& a) {
  const auto gold = read_gold(a.gold, ctx.cfg);
  const ErrorPolicy policy = parse_error_policy(a.error_policy);
  std::map<std::string, Label> predicted;
  if (!a.all_valid) {
    if (a.predictions.empty()) throw ConfigError("eval-classify needs --predictions or --all-valid");
    require_file(a.predictions);
    for (const auto& p : read_predictions(a.predictions)) {
      predicted[p.id] = p.label.value_or(policy == ErrorPolicy::as_valid ? Label::valid : Label::noisy);
    }
  }
  std::vector<Label> g, p;
  for (const auto& [id, label] : gold) {
    g.push_back(label);
    if (a.all_valid) {
      p.push_back(Label::valid);
    } else {
      auto it = predicted.find(id);
      if (it == predicted.end()) throw MissingPrediction(id);
      p.push_back(it->second);
    }
  }
  const auto report = classification_report(confusion(g, p));
  Json j = to_json(report);
  std::optional<ValidRatio> ratio;
  try {
    ratio = valid_ratio(p, g);
    j["valid_ratio"] = Json{{"ratio", ratio->ratio}, {"baseline", ratio->baseline}, {"delta", ratio->delta},
                            {"predicted_valid", ratio->predicted_valid}};
  } catch (const EmptyPredictedValid&) {
    j["valid_ratio"] = nullptr;
  }
  const auto path = ctx.cfg.out_dir / "classification_report.json";
  write_json_file(path, j);

  auto m = manifest_for(ctx, "eval-classify");
  m.inputs = {a.gold};
  if (!a.all_valid) m.inputs.emplace_back(a.predictions);
  m.outputs = {path};
  m.parameters = Json{{"all_valid", a.all_valid}, {"name", a.name}, {"error_policy", a.error_policy}};
  write_manifest(ctx.cfg.out_dir, m);

  ctx.out << format_classification_table(report, a.name);
  if (ratio) {
    ctx.out << "valid ratio among predicted valid: " << text::format_fixed(100 * ratio->ratio, 1) << "% (baseline "
            << text::format_fixed(100 * ratio->baseline, 1) << "%, " << (ratio->delta < 0 ? "" : "+")
            << text::format_fixed(100 * ratio->delta, 1) << " points)\n";
  }
  return 0;
}

struct EvalBleuArgs {
  std::string generations;
  std::string references;
  std::string labels;
  std::string baseline;
  std::string stopwords = "keep";
  std::string stopword_file;
  std::string text_field = "text";
  std::string name = "model";
};

int cmd_eval_bleu(Context& ctx, const EvalBleuArgs& a) {
  require_file(a.generations);
  require_file(a.references);
  StopwordMode mode;
  if (a.stopwords == "keep") mode = StopwordMode::keep_stopwords;
  else if (a.stopwords == "drop") mode = StopwordMode::drop_stopwords;
  else throw ConfigError("--stopwords must be keep or drop");
  const StopwordSet stop = a.stopword_file.empty() ? default_stopwords() : load_stopwords(a.stopword_file);

  const auto gens = read_text_table(a.generations, a.text_field);
  const auto refs = read_text_table(a.references, a.text_field);
  std::vector<SubsetLabel> labels;
  if (!a.labels.empty()) {
    require_file(a.labels);
    labels = read_subset_labels(a.labels);
  }
  std::optional<TextTable> base;
  if (!a.baseline.empty()) {
    require_file(a.baseline);
    base = read_text_table(a.baseline, a.text_field);
  }
  const auto report = bleu_report(gens, refs, labels, base ? &*base : nullptr, mode, stop);
  const auto path = ctx.cfg.out_dir / "bleu_report.json";
  write_json_file(path, to_json(report));

  auto m = manifest_for(ctx, "eval-bleu");
  m.inputs = {a.generations, a.references};
  for (const auto& p : {a.labels, a.baseline, a.stopword_file}) {
    if (!p.empty()) m.inputs.emplace_back(p);
  }
  m.outputs = {path};
  m.parameters = Json{{"stopwords", a.stopwords}, {"text_field", a.text_field}, {"name", a.name}};
  write_manifest(ctx.cfg.out_dir, m);
  ctx.out << format_bleu_table(report, a.name);
  return 0;
}

struct ClusterArgs {
  std::string generations;
  std::string text_field = "text";
  std::size_t k = 50;
};

int cmd_cluster(Context& ctx, const ClusterArgs& a) {
  require_file(a.generations);
  const auto table = read_text_table(a.generations, a.text_field);
  std::vector<std::string> ids, texts;
  std::map<std::string, std::string> by_id;
  for (const auto& [id, t] : table) {
    ids.push_back(id);
    texts.push_back(t);
    by_id[id] = t;
  }
  Gateway gw = make_gateway(ctx);
  ModelConfig em = ctx.cfg.model;
  em.model = ctx.cfg.embedding_model;
  const auto embeddings = gw.embed_texts(texts, em);

  TopicOptions opt;
  opt.k = a.k;
  const auto model = build_topic_model(ids, texts, embeddings, opt);
  const auto model_path = ctx.cfg.out_dir / "topic_model.json";
  const auto sheet_path = ctx.cfg.out_dir / "annotation_sheet.jsonl";
  write_json_file(model_path, to_json(model));
  write_annotations(sheet_path, annotation_sheet(model, by_id));

  auto m = manifest_for(ctx, "cluster");
  m.inputs = {a.generations};
  m.outputs = {model_path, sheet_path};
  m.parameters = Json{{"k", a.k}, {"embedding_model", ctx.cfg.embedding_model}, {"text_field", a.text_field}};
  write_manifest(ctx.cfg.out_dir, m);

  ctx.out << model.k << " clusters over " << model.size() << " comments, mean coherence "
          << (std::isnan(model.mean_coherence) ? std::string("-") : text::format_fixed(model.mean_coherence, 3))
          << "\nfill information (1-5) and relevance (1-3) in " << sheet_path.string()
          << ", then run quality-report\n";
  return 0;
}

struct QualityArgs {
  std::string model;
  std::string annotations;
};

int cmd_quality(Context& ctx, const QualityArgs& a) {
  require_file(a.model);
  require_file(a.annotations);
  Json mj;
  try {
    mj = Json::parse(jsonl::read_file(a.model));
  } catch (const Json::exception& e) {
    throw IoError(a.model + ": " + e.what());
  }
  const auto model = topic_model_from_json(mj);
  const auto scores = propagate_scores(model, read_annotations(a.annotations));
  const auto path = ctx.cfg.out_dir / "quality_report.json";
  Json j = to_json(scores);
  j["mean_coherence"] = std::isnan(model.mean_coherence) ? Json(nullptr) : Json(model.mean_coherence);
  write_json_file(path, j);

  auto m = manifest_for(ctx, "quality-report");
  m.inputs = {a.model, a.annotations};
  m.outputs = {path};
  write_manifest(ctx.cfg.out_dir, m);
  ctx.out << format_quality_table(scores, model);
  return 0;
}

struct AnnotateArgs {
  std::string input;
  std::string labels;
  std::string guidelines;
  std::string compare;
};

int cmd_annotate(Context& ctx, const AnnotateArgs& a) {
  const fs::path labels = a.labels.empty() ? ctx.cfg.out_dir / "annotations.jsonl" : fs::path(a.labels);
  if (!a.compare.empty()) {
    require_file(labels);
    require_file(a.compare);
    const auto r = compare_annotations(read_annotation_file(labels), read_annotation_file(a.compare));
    const auto path = ctx.cfg.out_dir / "kappa_report.json";
    write_json_file(path, to_json(r));
    auto m = manifest_for(ctx, "annotate-compare");
    m.inputs = {labels, a.compare};
    m.outputs = {path};
    write_manifest(ctx.cfg.out_dir, m);
    ctx.out << r.items << " instances labelled by both, observed agreement "
            << text::format_fixed(r.observed_agreement, 3) << ", Cohen's kappa " << text::format_fixed(r.kappa, 3)
            << "\n";
    return 0;
  }

  if (a.input.empty()) throw ConfigError("annotate needs --input (or --compare)");
  const Dataset sample = load_dataset(a.input, ctx.cfg);
  std::string guidelines;
  fs::path gpath = a.guidelines;
  if (gpath.empty() && fs::is_regular_file(fs::path(CRCLEAN_SHARE_DIR) / "annotation_guidelines.txt")) {
    gpath = fs::path(CRCLEAN_SHARE_DIR) / "annotation_guidelines.txt";
  }
  if (!gpath.empty()) guidelines = jsonl::read_file(gpath);

  AnnotationSession session(sample, labels);
  if (session.first_pending() > 0 && session.first_pending() < session.size()) {
    ctx.out << "resuming at instance " << session.first_pending() + 1 << " of " << session.size() << "\n";
  }
  KeyReader keys(ctx.in);
  session.run(std::ref(keys), ctx.out, guidelines);

  auto m = manifest_for(ctx, "annotate");
  m.inputs = {a.input};
  m.outputs = {labels};
  write_manifest(ctx.cfg.out_dir, m);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic cleaning and evaluation of code-review comment datasets", "crclean"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  Globals g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for every sampling step");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--parallelism", g.parallelism, "Concurrent model requests");
  app.add_flag("--trace", g.trace, "Log request and response bodies to stderr (API key redacted)");

  std::function<int(Context&)> action;

  IngestArgs ingest;
  auto* c = app.add_subcommand("ingest", "Validate and normalize a raw dataset, separating rejected records");
  c->add_option("--input", ingest.input, "Line-delimited records")->required();
  c->add_option("--default-split", ingest.default_split, "Split for records without one");
  c->callback([&] { action = [&](Context& ctx) { return cmd_ingest(ctx, ingest); }; });

  SampleArgs sample;
  c = app.add_subcommand("sample", "Draw a seeded random sample, e.g. for annotation");
  c->add_option("--input", sample.input)->required();
  c->add_option("--size", sample.size)->required();
  c->add_option("--split", sample.split, "Only sample from this split");
  c->callback([&] { action = [&](Context& ctx) { return cmd_sample(ctx, sample); }; });

  ClassifyArgs classify;
  c = app.add_subcommand("classify", "Label every comment valid or noisy with the configured model");
  c->add_option("--input", classify.input)->required();
  c->add_option("--split", classify.split, "Only classify this split");
  c->add_option("--checkpoint", classify.checkpoint, "Resumable progress file");
  c->add_option("--output", classify.output, "Predictions file name inside --out")->capture_default_str();
  c->callback([&] { action = [&](Context& ctx) { return cmd_classify(ctx, classify); }; });

  CleanArgs clean;
  c = app.add_subcommand("clean", "Keep the instances predicted valid");
  c->add_option("--input", clean.input)->required();
  c->add_option("--predictions", clean.predictions)->required();
  c->add_option("--error-policy", clean.error_policy, "noisy or valid")->capture_default_str();
  c->callback([&] { action = [&](Context& ctx) { return cmd_clean(ctx, clean); }; });

  ControlArgs control;
  c = app.add_subcommand("control", "Random sample matching the cleaned sizes");
  c->add_option("--input", control.input, "Original dataset")->required();
  auto* cleaned_opt = c->add_option("--cleaned", control.cleaned, "Cleaned dataset whose split sizes to match");
  auto* size_opt = c->add_option("--size", control.size, "Total size, when not matching a cleaned dataset");
  cleaned_opt->excludes(size_opt);
  c->callback([&] {
    if (control.cleaned.empty() && size_opt->count() == 0) throw CLI::ValidationError("control needs --cleaned or --size");
    action = [&](Context& ctx) { return cmd_control(ctx, control); };
  });

  EvalClassifyArgs evc;
  c = app.add_subcommand("eval-classify", "Per-class and weighted precision, recall and F1 against gold labels");
  c->add_option("--gold", evc.gold)->required();
  c->add_option("--predictions", evc.predictions);
  c->add_flag("--all-valid", evc.all_valid, "Score the predict-everything-valid baseline");
  c->add_option("--name", evc.name, "Row name in the table")->capture_default_str();
  c->add_option("--error-policy", evc.error_policy, "noisy or valid")->capture_default_str();
  c->callback([&] { action = [&](Context& ctx) { return cmd_eval_classify(ctx, evc); }; });

  EvalBleuArgs evb;
  c = app.add_subcommand("eval-bleu", "Sentence BLEU-4 per subset, with Wilcoxon tests against a baseline");
  c->add_option("--generations", evb.generations)->required();
  c->add_option("--references", evb.references)->required();
  c->add_option("--labels", evb.labels, "Subset labels {id, label, source}");
  c->add_option("--baseline", evb.baseline, "Baseline generations");
  c->add_option("--stopwords", evb.stopwords, "keep or drop")->capture_default_str();
  c->add_option("--stopword-file", evb.stopword_file);
  c->add_option("--text-field", evb.text_field)->capture_default_str();
  c->add_option("--name", evb.name)->capture_default_str();
  c->callback([&] { action = [&](Context& ctx) { return cmd_eval_bleu(ctx, evb); }; });

  ClusterArgs clu;
  c = app.add_subcommand("cluster", "Cluster generated comments and emit an annotation sheet");
  c->add_option("--generations", clu.generations)->required();
  c->add_option("--text-field", clu.text_field)->capture_default_str();
  c->add_option("--k", clu.k, "Number of clusters")->capture_default_str();
  c->callback([&] { action = [&](Context& ctx) { return cmd_cluster(ctx, clu); }; });

  QualityArgs qa;
  c = app.add_subcommand("quality-report", "Propagate annotated scores to every clustered comment");
  c->add_option("--model", qa.model, "topic_model.json from cluster")->required();
  c->add_option("--annotations", qa.annotations, "Filled annotation sheet")->required();
  c->callback([&] { action = [&](Context& ctx) { return cmd_quality(ctx, qa); }; });

  AnnotateArgs ann;
  c = app.add_subcommand("annotate", "Label a sample interactively (v/n/s/b/q), or compare two annotators");
  c->add_option("--input", ann.input, "Sample to label");
  c->add_option("--labels", ann.labels, "Label file, created or resumed");
  c->add_option("--guidelines", ann.guidelines, "Text shown before the first instance");
  c->add_option("--compare", ann.compare, "Second annotator's label file; prints Cohen's kappa");
  c->callback([&] { action = [&](Context& ctx) { return cmd_annotate(ctx, ann); }; });

  std::vector<const char*> argv{"crclean"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    Context ctx{resolve_config(g), in, out, err};
    return action(ctx);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cin, std::cout, std::cerr);
}

}  // namespace crclean
