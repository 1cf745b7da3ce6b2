#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crclean::text {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;

/// Splits on '\n'; a trailing '\r' on each line is dropped. A final newline
/// does not produce an empty trailing line.
std::vector<std::string> split_lines(std::string_view s);

/// ASCII punctuation. Bytes >= 0x80 are never punctuation so UTF-8 text
/// stays inside word tokens.
inline bool is_punct(char c) noexcept {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && ((u >= 0x21 && u <= 0x2f) || (u >= 0x3a && u <= 0x40) ||
                      (u >= 0x5b && u <= 0x60) || (u >= 0x7b && u <= 0x7e));
}

inline bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Whitespace-and-punctuation split: maximal runs of word bytes, plus every
/// punctuation character as its own token. Case is preserved.
std::vector<std::string_view> approx_tokens(std::string_view s);

std::size_t approx_token_count(std::string_view s);

/// Replaces `{name}` placeholders in one left-to-right pass. Substituted text
/// is never rescanned; unknown placeholders are left verbatim.
template <typename Lookup>
std::string fill_template(std::string_view tmpl, Lookup&& lookup) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto name = tmpl.substr(i + 1, close - i - 1);
        if (const std::string* value = lookup(name)) {
          out += *value;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

/// Fixed-point with round-half-away-from-zero, e.g. format_fixed(63.65, 1) == "63.7".
std::string format_fixed(double value, int decimals);
double round_half_away(double value, int decimals);

}  // namespace crclean::text
