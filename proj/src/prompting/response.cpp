#include <optional>

#include "crclean/error.hpp"
#include "crclean/prompting.hpp"
#include "crclean/text.hpp"

namespace crclean {
namespace {

bool is_word_byte(char c) noexcept {
  return !text::is_space(c) && !text::is_punct(c);
}

struct Hits {
  bool valid = false;
  bool noisy = false;
};

// Whole-word, case-insensitive occurrences of the two label tokens.
Hits scan_tokens(std::string_view s) {
  Hits hits;
  const std::string lower = text::to_lower(s);
  for (std::string_view token : {std::string_view("valid"), std::string_view("noisy")}) {
    std::size_t pos = 0;
    while ((pos = lower.find(token, pos)) != std::string::npos) {
      const bool left_ok = pos == 0 || !is_word_byte(lower[pos - 1]);
      const std::size_t after = pos + token.size();
      const bool right_ok = after >= lower.size() || !is_word_byte(lower[after]);
      if (left_ok && right_ok) {
        (token == "valid" ? hits.valid : hits.noisy) = true;
        break;
      }
      pos = after;
    }
  }
  return hits;
}

// Value part of the first "Label:" line, tolerating markdown emphasis and
// heading markers around the key.
std::optional<std::string_view> label_field(std::string_view response) {
  std::size_t pos = 0;
  while (pos <= response.size()) {
    auto nl = response.find('\n', pos);
    auto line = response.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    std::string_view s = text::trim(line);
    while (!s.empty() && (s.front() == '*' || s.front() == '#' || s.front() == '_' || s.front() == '-')) {
      s.remove_prefix(1);
    }
    s = text::trim(s);
    if (s.size() >= 5 && text::iequals(s.substr(0, 5), "label")) {
      std::string_view rest = s.substr(5);
      while (!rest.empty() && (rest.front() == '*' || rest.front() == '_' || text::is_space(rest.front()))) {
        rest.remove_prefix(1);
      }
      if (!rest.empty() && rest.front() == ':') return rest.substr(1);
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return std::nullopt;
}

}  // namespace

Label parse_label_response(std::string_view response) {
  if (text::trim(response).empty()) throw UnparsableResponse(std::string(response));

  if (auto field = label_field(response)) {
    Hits hits = scan_tokens(*field);
    if (hits.valid && hits.noisy) throw AmbiguousResponse(std::string(response));
    if (hits.valid) return Label::valid;
    if (hits.noisy) return Label::noisy;
  }

  Hits hits = scan_tokens(response);
  if (hits.valid && hits.noisy) throw AmbiguousResponse(std::string(response));
  if (hits.valid) return Label::valid;
  if (hits.noisy) return Label::noisy;
  throw UnparsableResponse(std::string(response));
}

}  // namespace crclean
