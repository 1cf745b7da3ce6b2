#include <exception>
#include <thread>
#include <unordered_set>

#include "crclean/error.hpp"
#include "crclean/gateway.hpp"
#include "crclean/jsonl.hpp"
#include "crclean/text.hpp"

namespace crclean {
namespace {

constexpr int kCheckpointVersion = 1;

// Completed predictions keyed by dataset index.
std::unordered_map<std::size_t, Prediction> load_checkpoint(const std::filesystem::path& path,
                                                            const Dataset& dataset, const std::string& run) {
  std::unordered_map<std::size_t, Prediction> done;
  if (!std::filesystem::exists(path)) return done;

  const std::string contents = jsonl::read_file(path);
  if (contents.empty()) return done;
  const auto lines = text::split_lines(contents);
  const bool torn_tail = contents.back() != '\n';
  const std::string p = path.string();

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < dataset.size(); ++i) index.emplace(dataset[i].id, i);

  for (std::size_t n = 0; n < lines.size(); ++n) {
    Json rec;
    try {
      rec = Json::parse(lines[n]);
    } catch (const Json::exception&) {
      if (torn_tail && n + 1 == lines.size()) break;  // crash mid-append
      throw CheckpointCorrupt(p, "line " + std::to_string(n + 1) + " is not JSON");
    }
    if (n == 0) {
      if (!rec.is_object() || rec.value("checkpoint", 0) != kCheckpointVersion) {
        throw CheckpointCorrupt(p, "missing checkpoint header");
      }
      if (rec.value("run", std::string{}) != run) {
        throw CheckpointCorrupt(p, "written by a different prompt/model configuration");
      }
      continue;
    }
    Prediction pred;
    try {
      pred = prediction_from_json(rec);
    } catch (const Error& e) {
      throw CheckpointCorrupt(p, "line " + std::to_string(n + 1) + ": " + e.what());
    }
    auto it = index.find(pred.id);
    if (it == index.end()) throw CheckpointCorrupt(p, "id '" + pred.id + "' is not in the dataset");
    if (!done.emplace(it->second, std::move(pred)).second) {
      throw CheckpointCorrupt(p, "id '" + dataset[it->second].id + "' recorded twice");
    }
  }
  if (torn_tail) {
    auto cut = contents.rfind('\n');
    jsonl::write_file_atomic(path, cut == std::string::npos ? std::string{} : contents.substr(0, cut + 1));
  }
  return done;
}

}  // namespace

std::vector<Prediction> Gateway::classify_batch(const Dataset& dataset, const PromptConfig& prompt,
                                                const ModelConfig& model, unsigned parallelism,
                                                const std::filesystem::path& checkpoint) {
  if (parallelism < 1) throw InvalidArgument("parallelism must be >= 1");
  prompt.validate();
  model.validate();

  const std::string run = run_fingerprint(prompt, model);
  auto done = load_checkpoint(checkpoint, dataset, run);

  std::vector<std::optional<Prediction>> results(dataset.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (auto it = done.find(i); it != done.end()) results[i] = std::move(it->second);
    else pending.push_back(i);
  }

  if (checkpoint.has_parent_path()) std::filesystem::create_directories(checkpoint.parent_path());
  const bool fresh = !std::filesystem::exists(checkpoint) || std::filesystem::file_size(checkpoint) == 0;
  std::ofstream log(checkpoint, std::ios::binary | std::ios::app);
  if (!log) throw IoError("cannot open checkpoint " + checkpoint.string());
  if (fresh) {
    log << jsonl::dump_line(Json{{"checkpoint", kCheckpointVersion}, {"run", run}});
    log.flush();
  }

  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const std::size_t i = pending[k];
      try {
        Prediction pred = classify_one(dataset[i], prompt, model);
        {
          std::lock_guard lock(log_mutex);
          log << jsonl::dump_line(to_json(pred));
          log.flush();
          if (!log) throw IoError("checkpoint append failed: " + checkpoint.string());
        }
        results[i] = std::move(pred);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop.store(true);
        return;
      }
    }
  };

  const unsigned threads = std::min<std::size_t>(parallelism, std::max<std::size_t>(pending.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Prediction> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace crclean
