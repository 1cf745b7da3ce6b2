#include <doctest.h>

#include <random>

#include "crclean/metrics.hpp"
#include "crclean/text.hpp"
#include "oracles.hpp"

using namespace crclean;

namespace {

double pct(double x) { return text::round_half_away(100.0 * x, 1); }

std::pair<std::vector<Label>, std::vector<Label>> from_confusion(ConfusionMatrix cm) {
  std::vector<Label> gold, pred;
  auto add = [&](std::size_t n, Label g, Label p) {
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(g);
      pred.push_back(p);
    }
  };
  add(cm.tp, Label::valid, Label::valid);
  add(cm.fp, Label::noisy, Label::valid);
  add(cm.fn, Label::valid, Label::noisy);
  add(cm.tn, Label::noisy, Label::noisy);
  return {gold, pred};
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("confusion counts") {
  std::vector<Label> one{Label::valid};
  CHECK(confusion(one, one) == ConfusionMatrix{1, 0, 0, 0});
  std::vector<Label> g{Label::valid, Label::valid, Label::noisy, Label::noisy};
  std::vector<Label> p{Label::valid, Label::noisy, Label::valid, Label::noisy};
  CHECK(confusion(g, p) == ConfusionMatrix{1, 1, 1, 1});
  CHECK_THROWS_AS(confusion(g, one), LengthMismatch);
}

TEST_CASE("all-valid baseline") {
  auto [g, p] = from_confusion({172, 98, 0, 0});
  auto cm = confusion(g, p);
  CHECK(cm == ConfusionMatrix{172, 98, 0, 0});
  auto v = class_metrics(cm, Label::valid);
  CHECK(pct(v.precision) == 63.7);
  CHECK(pct(v.recall) == 100.0);
  CHECK(pct(v.f1) == 77.8);
  auto n = class_metrics(cm, Label::noisy);
  CHECK(n.precision == 0.0);
  CHECK(n.recall == 0.0);
  CHECK(n.f1 == 0.0);
  CHECK(n.no_predictions);
  auto w = weighted_metrics(cm);
  CHECK(pct(w.precision) == 40.6);
  CHECK(pct(w.recall) == 63.7);
  CHECK(pct(w.f1) == 49.6);
}

TEST_CASE("solved classifier confusion reproduces its row") {
  // Solve tp/fp/fn/tn from valid P=85.1, R=36.6 over 172 valid / 98 noisy
  // instead of trusting the hard-coded counts.
  std::size_t found = 0;
  ConfusionMatrix solved;
  for (std::size_t tp = 0; tp <= 172; ++tp) {
    for (std::size_t fp = 0; fp <= 98; ++fp) {
      if (tp + fp == 0) continue;
      const double prec = static_cast<double>(tp) / static_cast<double>(tp + fp);
      const double rec = static_cast<double>(tp) / 172.0;
      const double np = static_cast<double>(98 - fp) / static_cast<double>(270 - tp - fp);
      const double nr = static_cast<double>(98 - fp) / 98.0;
      if (pct(prec) == 85.1 && pct(rec) == 36.6 && pct(np) == 44.4 && pct(nr) == 88.8) {
        ++found;
        solved = {tp, fp, 172 - tp, 98 - fp};
      }
    }
  }
  REQUIRE(found == 1);
  CHECK(solved == ConfusionMatrix{63, 11, 109, 87});

  auto r = classification_report(solved);
  CHECK(pct(r.valid.precision) == 85.1);
  CHECK(pct(r.valid.recall) == 36.6);
  CHECK(pct(r.valid.f1) == 51.2);
  CHECK(pct(r.noisy.precision) == 44.4);
  CHECK(pct(r.noisy.recall) == 88.8);
  CHECK(pct(r.noisy.f1) == 59.2);
  CHECK(r.valid.predicted_count == 74);
  CHECK(r.noisy.predicted_count == 196);
  CHECK(pct(r.overall.precision) == 70.3);
}

TEST_CASE("perfect predictions") {
  auto r = classification_report({30, 0, 0, 20});
  for (const auto& m : {r.valid, r.noisy, r.overall}) {
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
  }
}

TEST_CASE("weighted metrics are the support-weighted class means; swap commutes") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    ConfusionMatrix cm{rng() % 40, rng() % 40, rng() % 40, rng() % 40};
    if (cm.tp + cm.fn == 0 || cm.fp + cm.tn == 0) continue;
    auto v = class_metrics(cm, Label::valid);
    auto n = class_metrics(cm, Label::noisy);
    auto w = weighted_metrics(cm);
    const double sv = static_cast<double>(cm.tp + cm.fn), sn = static_cast<double>(cm.fp + cm.tn);
    CHECK(std::abs(w.precision - (v.precision * sv + n.precision * sn) / (sv + sn)) < 1e-12);
    CHECK(std::abs(w.recall - (v.recall * sv + n.recall * sn) / (sv + sn)) < 1e-12);
    CHECK(std::abs(w.f1 - (v.f1 * sv + n.f1 * sn) / (sv + sn)) < 1e-12);

    auto vs = class_metrics(cm.swapped(), Label::noisy);
    CHECK(vs.precision == v.precision);
    CHECK(vs.recall == v.recall);
    CHECK(vs.f1 == v.f1);
    CHECK(cm.swapped().swapped() == cm);
    if (v.precision + v.recall > 0) CHECK(v.f1 == doctest::Approx(2 * v.precision * v.recall / (v.precision + v.recall)));
  }
}

TEST_CASE("table layout prints the rounded row") {
  auto s = format_classification_table(classification_report({172, 98, 0, 0}), "Baseline");
  CHECK(s.find("40.6") != std::string::npos);
  CHECK(s.find("63.7") != std::string::npos);
  CHECK(s.find("49.6") != std::string::npos);
  CHECK(s.find("77.8") != std::string::npos);
}

TEST_CASE("kappa hand cases") {
  using L = Label;
  std::vector<L> a{L::valid, L::valid, L::noisy, L::noisy}, b{L::valid, L::noisy, L::valid, L::noisy};
  CHECK(cohens_kappa(a, b) == 0.0);
  std::vector<L> c{L::valid, L::valid, L::valid, L::noisy}, d{L::valid, L::valid, L::noisy, L::noisy};
  // p_o = 0.75 and p_e = 0.75 * 0.5 + 0.25 * 0.5 = 0.5, so kappa is 0.5. A
  // value of 1/3 would need p_e = 0.625, which is a's marginals squared.
  CHECK(cohens_kappa(c, d) == 0.5);
  CHECK(cohens_kappa(a, a) == 1.0);
  std::vector<L> same{L::valid, L::valid};
  CHECK(cohens_kappa(same, same) == 1.0);
  std::vector<L> flip{L::valid, L::noisy}, rest{L::valid, L::valid};
  CHECK(cohens_kappa(flip, rest) == 0.0);
  CHECK_THROWS_AS(cohens_kappa(a, std::vector<L>{L::valid}), LengthMismatch);
  CHECK_THROWS_AS(cohens_kappa(std::vector<L>{L::valid}, std::vector<L>{L::valid}), InvalidArgument);
}

TEST_CASE("kappa is symmetric") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<int> a, b;
    for (int k = 0; k < 12; ++k) {
      a.push_back(static_cast<int>(rng() % 3));
      b.push_back(static_cast<int>(rng() % 3));
    }
    double ab, ba;
    try {
      ab = cohens_kappa(a, b);
    } catch (const DegenerateMarginals&) {
      continue;
    }
    ba = cohens_kappa(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
    CHECK(ab >= -1.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("wilcoxon hand cases") {
  std::vector<double> y(3, 0.0);
  auto r = wilcoxon_one_sided(std::vector<double>{1, 2, 3}, y);
  CHECK(r.p_value == 0.125);
  CHECK(r.statistic == 6.0);
  CHECK(r.method == WilcoxonMethod::exact);

  std::vector<double> x5{1, -1, 2, 3, 4}, y5(5, 0.0);
  auto r5 = wilcoxon_one_sided(x5, y5);
  auto o5 = oracle::wilcoxon_enumerate(x5, y5);
  CHECK(r5.statistic == 13.5);
  CHECK(r5.p_value == o5.p);
  CHECK(r5.p_value == 3.0 / 32.0);

  CHECK_THROWS_AS(wilcoxon_one_sided(std::vector<double>{1, 2}, std::vector<double>{1, 2}), AllZeroDifferences);
  CHECK_THROWS_AS(wilcoxon_one_sided(std::vector<double>{1}, std::vector<double>{1, 2}), LengthMismatch);
}

TEST_CASE("wilcoxon exact p equals enumeration, with ties and zeros") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % 7);
      y[i] = static_cast<double>(rng() % 7);
    }
    auto o = oracle::wilcoxon_enumerate(x, y);
    if (o.n == 0) continue;
    auto r = wilcoxon_one_sided(x, y);
    CHECK(r.n_effective == o.n);
    CHECK(r.statistic == o.w_plus);
    CHECK(r.p_value == doctest::Approx(o.p).epsilon(1e-12));
  }
}

TEST_CASE("wilcoxon normal approximation tracks the exact p") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.3, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 10 + rng() % 3;
    std::vector<double> x(n), y(n, 0.0);
    for (auto& v : x) v = noise(rng);
    auto exact = wilcoxon_one_sided(x, y, WilcoxonMode::force_exact);
    auto approx = wilcoxon_one_sided(x, y, WilcoxonMode::force_normal);
    CHECK(approx.method == WilcoxonMethod::normal_approximation);
    CHECK(std::abs(exact.p_value - approx.p_value) < 0.02);
  }
  std::vector<double> big(30), zeros(30, 0.0);
  for (std::size_t i = 0; i < 30; ++i) big[i] = static_cast<double>(i % 5) + 0.5;
  CHECK(wilcoxon_one_sided(big, zeros).method == WilcoxonMethod::normal_approximation);
}

}  // TEST_SUITE
