#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crclean/corpus.hpp"

namespace crclean {

enum class InstructionVariant { definition, auxiliary };
enum class InputMode { comment_only, comment_plus_diff };

std::string_view to_string(InstructionVariant v) noexcept;
std::string_view to_string(InputMode m) noexcept;
InstructionVariant parse_instruction_variant(std::string_view s);  // throws ConfigError
InputMode parse_input_mode(std::string_view s);                    // throws ConfigError

/// Template texts. Placeholders: `{definitions}` and `{rules}` in the system
/// template; `{comment}` and `{diff}` in the user templates.
struct PromptTemplates {
  std::string system;
  std::string user_comment_only;
  std::string user_comment_plus_diff;
  std::string definitions;

  static PromptTemplates builtin();
  /// Loads system.txt, user_comment.txt, user_comment_diff.txt and
  /// definitions.txt from `dir`; missing files fall back to the built-ins.
  static PromptTemplates from_directory(const std::filesystem::path& dir);
};

std::vector<std::string> builtin_auxiliary_rules();
/// One rule per non-blank line; a leading "N." or "-" bullet is stripped.
std::vector<std::string> load_rules_file(const std::filesystem::path& path);

struct PromptConfig {
  InstructionVariant variant = InstructionVariant::definition;
  InputMode input_mode = InputMode::comment_only;
  std::vector<std::string> auxiliary_rules = builtin_auxiliary_rules();
  std::size_t diff_token_budget = 3000;
  PromptTemplates templates = PromptTemplates::builtin();

  /// Throws ConfigError.
  void validate() const;
  /// Short tag such as "definition/comment-only", recorded with predictions.
  std::string variant_tag() const;
};

struct RenderedPrompt {
  std::string system_text;
  std::string user_text;
  /// 16 hex digits of SHA-256 over the rendered bytes.
  std::string fingerprint;
};

RenderedPrompt render_prompt(const ReviewInstance& instance, const PromptConfig& config);

/// Single approximate token appended where hunks were dropped.
inline constexpr std::string_view kElisionMarker = "\xE2\x80\xA6truncated\xE2\x80\xA6";

/// Keeps whole hunks from the start while they fit in `budget` approximate
/// tokens (marker included) and appends the elision marker. Unchanged when
/// the diff already fits. Text that does not parse as a diff is cut on line
/// boundaries instead. Throws InvalidArgument when budget is 0.
std::string truncate_diff(std::string_view patch, std::size_t budget);

/// Extracts the label from a model response: the `Label:` line first, then
/// the whole text. Throws UnparsableResponse or AmbiguousResponse.
Label parse_label_response(std::string_view response);

}  // namespace crclean
