#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "crclean/bleu.hpp"
#include "crclean/jsonl.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crclean;
using Tokens = std::vector<std::string>;

TEST_SUITE("bleu") {

TEST_CASE("tokenizer") {
  CHECK(tokenize("Why do we have this flag?").tokens == Tokens{"why", "do", "we", "have", "this", "flag", "?"});
  CHECK(tokenize("Why do we have this flag?", StopwordMode::drop_stopwords).tokens == Tokens{"flag", "?"});
  CHECK(tokenize("").tokens.empty());
  CHECK(tokenize("   \n\t").tokens.empty());
  CHECK(tokenize("Use `Foo.bar()` here").tokens == Tokens{"use", "Foo.bar()", "here"});
  CHECK(tokenize("a,b").tokens == Tokens{"a", ",", "b"});
}

TEST_CASE("shipped stopword list equals the built-in list") {
  CHECK(load_stopwords(testing::share_file("stopwords_en.txt")) == default_stopwords());
}

TEST_CASE("bleu4 reference values") {
  CHECK(std::abs(bleu4(Tokens{"a", "b", "c", "d", "e"}, Tokens{"a", "b", "c", "d", "f"}) - 66.87) <= 0.01);
  const Tokens s{"the", "cat", "sat", "on", "the", "mat"};
  CHECK(bleu4(s, s) == doctest::Approx(100.0));
  CHECK(bleu4(Tokens{}, s) == 0.0);
  const double disjoint = bleu4(Tokens{"x", "y", "z"}, Tokens{"p", "q", "r"});
  CHECK(disjoint > 0.0);
  CHECK(disjoint < 1.0);
  CHECK(bleu4(Tokens{"a"}, Tokens{"a"}) <= 100.0);
}

TEST_CASE("bleu4 matches brute-force n-gram counting") {
  std::mt19937_64 rng(5);
  const Tokens vocab{"a", "b", "c", "d", "e", "?", "."};
  auto draw = [&](std::size_t n) {
    Tokens t;
    for (std::size_t i = 0; i < n; ++i) t.push_back(vocab[rng() % vocab.size()]);
    return t;
  };
  for (int i = 0; i < 2000; ++i) {
    const Tokens c = draw(rng() % 12), r = draw(1 + rng() % 12);
    const double got = bleu4(c, r), want = oracle::bleu4(c, r);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 100.0);
  }
}

TEST_CASE("bleu4 is invariant under a consistent token renaming") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    Tokens c, r;
    for (int k = 0; k < 8; ++k) c.push_back(std::string(1, static_cast<char>('a' + rng() % 5)));
    for (int k = 0; k < 9; ++k) r.push_back(std::string(1, static_cast<char>('a' + rng() % 5)));
    std::string perm = "abcde";
    std::shuffle(perm.begin(), perm.end(), rng);
    auto rename = [&](Tokens t) {
      for (auto& s : t) s = std::string(1, perm[static_cast<std::size_t>(s[0] - 'a')]);
      return t;
    };
    CHECK(bleu4(rename(c), rename(r)) == doctest::Approx(bleu4(c, r)).epsilon(1e-12));
  }
}

TEST_CASE("report subsets and baseline comparison") {
  TextTable refs{{"a", "please add a null check here"}, {"b", "why is this public ?"},
                 {"c", "thanks for the fix"}, {"d", "rename this variable"}};
  TextTable gens{{"a", "add a null check"}, {"b", "why is this public"}, {"c", "thanks"}, {"d", "rename it"}};
  std::vector<SubsetLabel> labels{{"a", Label::valid, SubsetSource::our},
                                  {"b", Label::valid, SubsetSource::tufano},
                                  {"c", Label::noisy, SubsetSource::our},
                                  {"d", Label::valid, SubsetSource::our}};
  auto report = bleu_report(gens, refs, labels, nullptr, StopwordMode::keep_stopwords);
  REQUIRE(report.scores.size() == 4);
  const auto* test = report.find("test");
  REQUIRE(test);
  double sum = 0;
  for (const auto& [id, s] : report.scores) sum += s;
  CHECK(test->mean == doctest::Approx(sum / 4));
  REQUIRE(report.find("valid_combined"));
  CHECK(report.find("valid_combined")->count == 3);
  CHECK(report.find("noisy_our")->count == 1);
  CHECK(report.find("noisy_tufano")->count == 0);
  CHECK(std::isnan(report.find("noisy_tufano")->mean));

  auto self = bleu_report(gens, refs, labels, &gens, StopwordMode::keep_stopwords);
  CHECK(*self.find("test")->relative_delta == 0.0);
  CHECK(!self.find("test")->wilcoxon);
  CHECK(!self.find("test")->wilcoxon_note.empty());

  TextTable shuffled{{"d", "rename it"}, {"a", "add a null check"}, {"c", "thanks"}, {"b", "why is this public"}};
  auto reordered = bleu_report(shuffled, refs, labels, nullptr, StopwordMode::keep_stopwords);
  CHECK(reordered.find("test")->mean == test->mean);

  TextTable missing(gens.begin(), gens.end() - 1);
  CHECK_THROWS_AS(bleu_report(missing, refs, labels, nullptr, StopwordMode::keep_stopwords), IdMismatch);
  TextTable dup = gens;
  dup.back().first = "a";
  CHECK_THROWS_AS(bleu_report(dup, refs, labels, nullptr, StopwordMode::keep_stopwords), IdMismatch);
}

TEST_CASE("relative delta formatting") {
  ScoreTable base, fresh;
  for (int i = 0; i < 10; ++i) {
    base.emplace_back("i" + std::to_string(i), 5.73);
    fresh.emplace_back("i" + std::to_string(i), 6.04 + (i % 2 ? 0.01 : -0.01));
  }
  auto report = assemble_report(fresh, {}, &base);
  const auto* t = report.find("test");
  REQUIRE(t->relative_delta);
  CHECK(format_delta(*t->relative_delta) == "5.4%↑");
  CHECK(format_delta(-0.032) == "3.2%↓");
  REQUIRE(t->wilcoxon);
  CHECK(t->wilcoxon->p_value < 0.05);
  CHECK(format_bleu_table(report, "new").find("*") != std::string::npos);
}

TEST_CASE("subset label file") {
  testing::TempDir dir;
  testing::write_text(dir / "labels.jsonl",
                      "{\"id\":\"a\",\"label\":\"valid\"}\n{\"id\":\"b\",\"label\":\"noisy\",\"source\":\"tufano\"}\n");
  auto labels = read_subset_labels(dir / "labels.jsonl");
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].source == SubsetSource::our);
  CHECK(labels[1].source == SubsetSource::tufano);
  CHECK(labels[1].label == Label::noisy);
}

}  // TEST_SUITE
