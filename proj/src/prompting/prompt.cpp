#include <fstream>

#include "crclean/diff.hpp"
#include "crclean/error.hpp"
#include "crclean/hash.hpp"
#include "crclean/jsonl.hpp"
#include "crclean/prompting.hpp"
#include "crclean/text.hpp"

namespace crclean {

std::string_view to_string(InstructionVariant v) noexcept {
  return v == InstructionVariant::definition ? "definition" : "auxiliary";
}

std::string_view to_string(InputMode m) noexcept {
  return m == InputMode::comment_only ? "comment-only" : "comment-plus-diff";
}

InstructionVariant parse_instruction_variant(std::string_view s) {
  if (text::iequals(s, "definition")) return InstructionVariant::definition;
  if (text::iequals(s, "auxiliary")) return InstructionVariant::auxiliary;
  throw ConfigError("unknown instruction variant '" + std::string(s) + "' (definition|auxiliary)");
}

InputMode parse_input_mode(std::string_view s) {
  if (text::iequals(s, "comment-only") || text::iequals(s, "comment")) return InputMode::comment_only;
  if (text::iequals(s, "comment-plus-diff") || text::iequals(s, "comment+diff")) return InputMode::comment_plus_diff;
  throw ConfigError("unknown input mode '" + std::string(s) + "' (comment-only|comment-plus-diff)");
}

namespace builtin {

constexpr const char* kSystem =
    "You are an experienced software engineer who reviews code changes and judges the "
    "usefulness of code review comments.\n"
    "\n"
    "Your task is to decide whether a review comment is valid or noisy.\n"
    "\n"
    "{definitions}\n"
    "{rules}"
    "Classify the comment using these criteria. Answer with exactly one label.\n";

constexpr const char* kDefinitions =
    "Definitions:\n"
    "- valid: the comment asks the author for a concrete change to the submitted code. It "
    "names the problem and what should be done about it, for example improving "
    "documentation, naming or style, adding tests, restructuring the design, fixing a bug, "
    "or adding logging.\n"
    "- noisy: the comment does not ask for a specific, applicable change. This covers "
    "questions that only seek clarification, remarks that merely approve or justify the "
    "change, and comments too vague or unclear to act on.\n";

constexpr const char* kUserCommentOnly =
    "Review comment:\n"
    "{comment}\n"
    "\n"
    "Respond in exactly this format:\n"
    "Label: <valid or noisy>\n"
    "Reason: <one sentence>\n";

constexpr const char* kUserCommentPlusDiff =
    "Code change:\n"
    "{diff}\n"
    "\n"
    "Review comment:\n"
    "{comment}\n"
    "\n"
    "Respond in exactly this format:\n"
    "Label: <valid or noisy>\n"
    "Reason: <one sentence>\n";

}  // namespace builtin

PromptTemplates PromptTemplates::builtin() {
  return {builtin::kSystem, builtin::kUserCommentOnly, builtin::kUserCommentPlusDiff, builtin::kDefinitions};
}

PromptTemplates PromptTemplates::from_directory(const std::filesystem::path& dir) {
  PromptTemplates t = builtin();
  auto load = [&](const char* name, std::string& slot) {
    auto p = dir / name;
    if (std::filesystem::exists(p)) slot = jsonl::read_file(p);
  };
  load("system.txt", t.system);
  load("user_comment.txt", t.user_comment_only);
  load("user_comment_diff.txt", t.user_comment_plus_diff);
  load("definitions.txt", t.definitions);
  return t;
}

std::vector<std::string> builtin_auxiliary_rules() {
  return {
      "A comment that names a defect and how to fix it is valid.",
      "A comment that requests a specific refactoring, renaming, or simplification of the changed code is valid.",
      "A comment that asks for tests, documentation, logging, or error handling to be added or changed is valid.",
      "A question counts as valid only when it clearly implies a concrete change; a question that only asks for an explanation is noisy.",
      "A comment that praises, acknowledges, or justifies the change without requesting anything is noisy.",
      "A comment that is vague, ambiguous, or cannot be understood without outside context is noisy.",
      "A comment about something other than the submitted code (process, scheduling, other pull requests) is noisy.",
  };
}

std::vector<std::string> load_rules_file(const std::filesystem::path& path) {
  std::vector<std::string> rules;
  for (const auto& raw : text::split_lines(jsonl::read_file(path))) {
    std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t i = 0;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) line = text::trim(line.substr(i + 1));
    else if (line.front() == '-' || line.front() == '*') line = text::trim(line.substr(1));
    if (!line.empty()) rules.emplace_back(line);
  }
  return rules;
}

void PromptConfig::validate() const {
  if (variant == InstructionVariant::auxiliary && auxiliary_rules.empty()) {
    throw ConfigError("auxiliary prompt variant needs at least one rule");
  }
  if (diff_token_budget == 0) throw ConfigError("diff_token_budget must be positive");
}

std::string PromptConfig::variant_tag() const {
  return std::string(to_string(variant)) + "/" + std::string(to_string(input_mode));
}

namespace {

std::string render_rules(const std::vector<std::string>& rules) {
  std::string out = "Rules:\n";
  for (std::size_t i = 0; i < rules.size(); ++i) {
    out += std::to_string(i + 1) + ". " + rules[i] + "\n";
  }
  out += "\n";
  return out;
}

// Cuts on line boundaries when the text has no usable hunk structure.
std::string truncate_lines(std::string_view patch, std::size_t budget) {
  const std::size_t marker_cost = text::approx_token_count(kElisionMarker);
  std::string out;
  std::size_t used = 0;
  std::size_t pos = 0;
  while (pos < patch.size()) {
    auto nl = patch.find('\n', pos);
    auto end = nl == std::string_view::npos ? patch.size() : nl + 1;
    auto line = patch.substr(pos, end - pos);
    auto cost = text::approx_token_count(line);
    if (used + cost + marker_cost > budget) break;
    out += line;
    used += cost;
    pos = end;
  }
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += kElisionMarker;
  return out;
}

}  // namespace

std::string truncate_diff(std::string_view patch, std::size_t budget) {
  if (budget == 0) throw InvalidArgument("diff token budget must be positive");
  if (text::approx_token_count(patch) <= budget) return std::string(patch);

  std::vector<HunkSpan> spans;
  try {
    spans = hunk_spans(patch);
  } catch (const DiffSyntax&) {
    return truncate_lines(patch, budget);
  }

  const std::size_t marker_cost = text::approx_token_count(kElisionMarker);
  // Keep the prefix up to the end of the last hunk that still fits; any file
  // headers before the first hunk travel with it.
  std::size_t keep_end = 0;
  for (const auto& span : spans) {
    if (text::approx_token_count(patch.substr(0, span.end)) + marker_cost > budget) break;
    keep_end = span.end;
  }
  std::string out(patch.substr(0, keep_end));
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += kElisionMarker;
  return out;
}

RenderedPrompt render_prompt(const ReviewInstance& instance, const PromptConfig& config) {
  config.validate();
  const auto& t = config.templates;

  const std::string rules =
      config.variant == InstructionVariant::auxiliary ? render_rules(config.auxiliary_rules) : std::string{};
  auto system_lookup = [&](std::string_view name) -> const std::string* {
    if (name == "definitions") return &t.definitions;
    if (name == "rules") return &rules;
    return nullptr;
  };

  RenderedPrompt out;
  out.system_text = text::fill_template(t.system, system_lookup);

  std::string diff;
  if (config.input_mode == InputMode::comment_plus_diff) {
    diff = truncate_diff(instance.patch, config.diff_token_budget);
  }
  auto user_lookup = [&](std::string_view name) -> const std::string* {
    if (name == "comment") return &instance.comment;
    if (name == "diff" && config.input_mode == InputMode::comment_plus_diff) return &diff;
    return nullptr;
  };
  const auto& user_tmpl =
      config.input_mode == InputMode::comment_only ? t.user_comment_only : t.user_comment_plus_diff;
  out.user_text = text::fill_template(user_tmpl, user_lookup);

  std::string material = out.system_text;
  material += '\0';
  material += out.user_text;
  out.fingerprint = sha256_hex(material).substr(0, 16);
  return out;
}

}  // namespace crclean
