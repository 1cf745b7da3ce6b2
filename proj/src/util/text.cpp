#include "crclean/text.hpp"

#include <cmath>
#include <cstdio>

namespace crclean::text {

std::string_view trim(std::string_view s) noexcept {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < s.size()) {
    auto nl = s.find('\n', start);
    auto end = nl == std::string_view::npos ? s.size() : nl;
    auto line = s.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> approx_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (is_space(c)) {
      ++i;
    } else if (is_punct(c)) {
      out.push_back(s.substr(i, 1));
      ++i;
    } else {
      std::size_t j = i;
      while (j < s.size() && !is_space(s[j]) && !is_punct(s[j])) ++j;
      out.push_back(s.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

std::size_t approx_token_count(std::string_view s) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (is_space(c)) {
      ++i;
    } else if (is_punct(c)) {
      ++n;
      ++i;
    } else {
      while (i < s.size() && !is_space(s[i]) && !is_punct(s[i])) ++i;
      ++n;
    }
  }
  return n;
}

double round_half_away(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // Nudge by a few ulps so values such as 63.65 stored as 63.6499999... still
  // round the way a printed table does.
  const double scaled = value * scale;
  const double nudged = scaled + std::copysign(std::abs(scaled) * 1e-12, scaled);
  return std::round(nudged) / scale;
}

std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  double r = round_half_away(value, decimals);
  if (r == 0.0) r = 0.0;  // no "-0.0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
  return buf;
}

}  // namespace crclean::text
