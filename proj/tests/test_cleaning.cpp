#include <doctest.h>

#include <set>

#include "crclean/cleaning.hpp"
#include "crclean/error.hpp"
#include "support.hpp"

using namespace crclean;

namespace {

Dataset make_dataset(std::size_t n, std::size_t test_every = 0) {
  std::vector<ReviewInstance> v;
  for (std::size_t i = 0; i < n; ++i) {
    ReviewInstance r{"id" + std::to_string(i), "p", "c" + std::to_string(i)};
    r.split = test_every && i % test_every == 0 ? Split::test : Split::train;
    v.push_back(r);
  }
  return Dataset(v);
}

std::vector<Prediction> predict(const Dataset& d, std::function<std::optional<Label>(std::size_t)> f) {
  std::vector<Prediction> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    Prediction p;
    p.id = d[i].id;
    p.label = f(i);
    if (!p.label) p.error = "unparsable";
    out.push_back(p);
  }
  return out;
}

std::set<std::string> ids(const Dataset& d) {
  std::set<std::string> s;
  for (const auto& r : d) s.insert(r.id);
  return s;
}

}  // namespace

TEST_SUITE("cleaning") {

TEST_CASE("all valid keeps everything, all noisy keeps nothing") {
  const auto d = make_dataset(20);
  auto [all, r1] = apply_clean(d, predict(d, [](std::size_t) { return Label::valid; }));
  CHECK(all == d);
  CHECK(r1.retained_ratio == 1.0);
  auto [none, r2] = apply_clean(d, predict(d, [](std::size_t) { return Label::noisy; }));
  CHECK(none.empty());
  CHECK(r2.retained_ratio == 0.0);
  CHECK(r2.removed_size == 20);
}

TEST_CASE("cleaned size equals the valid prediction count; order kept; idempotent") {
  const auto d = make_dataset(50, 5);
  auto preds = predict(d, [](std::size_t i) -> std::optional<Label> {
    if (i % 7 == 0) return std::nullopt;
    return i % 3 ? Label::valid : Label::noisy;
  });
  std::size_t valid = 0;
  for (const auto& p : preds) valid += p.label == Label::valid;
  auto [cleaned, report] = apply_clean(d, preds);
  CHECK(cleaned.size() == valid);
  CHECK(report.retained_size + report.removed_size == report.input_size);
  CHECK(report.error_predictions > 0);
  for (std::size_t i = 1; i < cleaned.size(); ++i) {
    CHECK(std::stoi(cleaned[i - 1].id.substr(2)) < std::stoi(cleaned[i].id.substr(2)));
  }
  auto [twice, _] = apply_clean(cleaned, preds);
  CHECK(twice == cleaned);

  std::size_t per_split_total = 0;
  for (const auto& [s, c] : report.per_split) per_split_total += c.retained;
  CHECK(per_split_total == cleaned.size());

  auto [lenient, lr] = apply_clean(d, preds, ErrorPolicy::as_valid);
  CHECK(lenient.size() == valid + lr.error_predictions);
}

TEST_CASE("missing prediction is an error") {
  const auto d = make_dataset(3);
  auto preds = predict(d, [](std::size_t) { return Label::valid; });
  preds.pop_back();
  CHECK_THROWS_AS(apply_clean(d, preds), MissingPrediction);
}

TEST_CASE("controlled sampling: exact size, distinct ids, order kept, seed-reproducible") {
  const auto d = make_dataset(1000);
  auto a = sample_controlled(d, 337, 42);
  auto b = sample_controlled(d, 337, 42);
  auto c = sample_controlled(d, 337, 43);
  CHECK(a.size() == 337);
  CHECK(a == b);
  CHECK(ids(a) != ids(c));
  CHECK(ids(a).size() == 337);
  for (std::size_t i = 1; i < a.size(); ++i) {
    CHECK(std::stoi(a[i - 1].id.substr(2)) < std::stoi(a[i].id.substr(2)));
  }
  CHECK(sample_controlled(d, 1000, 1) == d);
  CHECK(sample_controlled(d, 0, 1).empty());
  CHECK_THROWS_AS(sample_controlled(d, 1001, 1), TargetTooLarge);
}

TEST_CASE("controlled sampling is roughly uniform") {
  const auto d = make_dataset(10);
  std::vector<int> hits(10, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    for (const auto& r : sample_controlled(d, 3, seed)) ++hits[std::stoi(r.id.substr(2))];
  }
  // Expected 1200 each; allow five standard deviations (about 145).
  for (int h : hits) {
    CHECK(h > 1200 - 145);
    CHECK(h < 1200 + 145);
  }
}

TEST_CASE("per-split controlled sampling matches each target") {
  const auto d = make_dataset(300, 3);  // 100 test, 200 train
  auto s = sample_controlled_per_split(d, {{Split::train, 55}, {Split::test, 21}}, 9);
  auto stats = dataset_stats(s);
  CHECK(stats.count(Split::train) == 55);
  CHECK(stats.count(Split::test) == 21);
  CHECK(sample_controlled_per_split(d, {{Split::train, 55}, {Split::test, 21}}, 9) == s);
  CHECK_THROWS_AS(sample_controlled_per_split(d, {{Split::test, 101}}, 9), TargetTooLarge);
}

TEST_CASE("valid ratio") {
  auto build = [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
    std::pair<std::vector<Label>, std::vector<Label>> pg;
    auto add = [&](std::size_t n, Label p, Label g) {
      for (std::size_t i = 0; i < n; ++i) {
        pg.first.push_back(p);
        pg.second.push_back(g);
      }
    };
    add(tp, Label::valid, Label::valid);
    add(fp, Label::valid, Label::noisy);
    add(fn, Label::noisy, Label::valid);
    add(tn, Label::noisy, Label::noisy);
    return pg;
  };
  auto [p, g] = build(63, 11, 109, 87);
  auto r = valid_ratio(p, g);
  CHECK(r.ratio == doctest::Approx(63.0 / 74.0));
  CHECK(r.baseline == doctest::Approx(172.0 / 270.0));
  CHECK(r.predicted_valid == 74);

  auto [pp, gg] = build(10, 0, 0, 5);
  CHECK(valid_ratio(pp, gg).ratio == 1.0);

  auto [pn, gn] = build(0, 0, 4, 4);
  CHECK_THROWS_AS(valid_ratio(pn, gn), EmptyPredictedValid);
  CHECK_THROWS_AS(valid_ratio(std::vector<Label>{Label::valid}, std::vector<Label>{}), LengthMismatch);
}

}  // TEST_SUITE
