#include "crclean/bleu.hpp"
#include "crclean/jsonl.hpp"
#include "crclean/text.hpp"

namespace crclean {

const StopwordSet& default_stopwords() {
  static const StopwordSet words = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've", "you'll",
      "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "she's",
      "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them", "their", "theirs",
      "themselves", "what", "which", "who", "whom", "this", "that", "that'll", "these", "those", "am",
      "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having", "do", "does",
      "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as", "until", "while",
      "of", "at", "by", "for", "with", "about", "against", "between", "into", "through", "during",
      "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
      "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how", "all",
      "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not", "only",
      "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don", "don't",
      "should", "should've", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't",
      "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't",
      "haven", "haven't", "isn", "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn",
      "needn't", "shan", "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won",
      "won't", "wouldn", "wouldn't"};
  return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  StopwordSet out;
  for (const auto& raw : text::split_lines(jsonl::read_file(path))) {
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    out.insert(text::to_lower(line));
  }
  return out;
}

TokenizedComment tokenize(std::string_view s, StopwordMode mode, const StopwordSet& stopwords) {
  TokenizedComment out;
  out.source = std::string(s);
  auto emit = [&](std::string tok) {
    if (mode == StopwordMode::drop_stopwords && stopwords.contains(tok)) return;
    out.tokens.push_back(std::move(tok));
  };
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (text::is_space(c)) {
      ++i;
    } else if (c == '`') {
      // Code span: runs of backticks open and close it (CommonMark style).
      std::size_t ticks = 0;
      while (i + ticks < s.size() && s[i + ticks] == '`') ++ticks;
      const std::string fence(ticks, '`');
      const auto close = s.find(fence, i + ticks);
      if (close == std::string_view::npos) {
        for (std::size_t k = 0; k < ticks; ++k) emit("`");
        i += ticks;
        continue;
      }
      auto body = text::trim(s.substr(i + ticks, close - i - ticks));
      if (!body.empty()) out.tokens.emplace_back(body);
      i = close + ticks;
    } else if (text::is_punct(c)) {
      emit(std::string(1, c));
      ++i;
    } else {
      std::size_t j = i;
      while (j < s.size() && !text::is_space(s[j]) && !text::is_punct(s[j])) ++j;
      emit(text::to_lower(s.substr(i, j - i)));
      i = j;
    }
  }
  return out;
}

}  // namespace crclean
