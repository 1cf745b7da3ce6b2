#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "crclean/metrics.hpp"

namespace crclean {

std::string_view to_string(WilcoxonMethod m) noexcept {
  return m == WilcoxonMethod::exact ? "exact" : "normal-approximation";
}

namespace {

struct RankedDiffs {
  // Ranks doubled so that average ranks of ties stay integral.
  std::vector<long long> doubled_ranks;
  std::vector<bool> positive;
  std::vector<std::size_t> tie_sizes;
};

RankedDiffs rank_differences(std::span<const double> x, std::span<const double> y) {
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    if (diff != 0.0) d.push_back(diff);
  }
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });

  RankedDiffs out;
  out.doubled_ranks.assign(n, 0);
  out.positive.assign(n, false);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
    // Positions i..j-1 share the average of ranks i+1..j; doubled: i+1+j.
    const long long doubled = static_cast<long long>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) out.doubled_ranks[order[k]] = doubled;
    out.tie_sizes.push_back(j - i);
    i = j;
  }
  for (std::size_t k = 0; k < n; ++k) out.positive[k] = d[k] > 0.0;
  return out;
}

// P(W+ >= observed) under the null by counting sign assignments. Subset
// sums are tabulated with a DP over doubled ranks, which enumerates all 2^n
// patterns implicitly and stays exact with ties.
double exact_upper_tail(const std::vector<long long>& doubled_ranks, long long observed_doubled) {
  const long long total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), 0LL);
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  long long reach = 0;
  for (long long r : doubled_ranks) {
    for (long long s = reach; s >= 0; --s) {
      if (ways[static_cast<std::size_t>(s)] != 0.0) ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
    }
    reach += r;
  }
  double count = 0.0;
  for (long long s = std::max(observed_doubled, 0LL); s <= total; ++s) count += ways[static_cast<std::size_t>(s)];
  return count / std::ldexp(1.0, static_cast<int>(doubled_ranks.size()));
}

double normal_upper_tail(double w_plus, std::size_t n, const std::vector<std::size_t>& ties) {
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
  for (auto t : ties) {
    const double tt = static_cast<double>(t);
    var -= (tt * tt * tt - tt) / 48.0;
  }
  if (var <= 0.0) return w_plus > mean ? 0.0 : 1.0;
  const double z = (w_plus - mean - 0.5) / std::sqrt(var);
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

WilcoxonResult wilcoxon_one_sided(std::span<const double> x, std::span<const double> y, WilcoxonMode mode) {
  if (x.size() != y.size()) throw LengthMismatch(x.size(), y.size());
  const RankedDiffs ranked = rank_differences(x, y);
  const std::size_t n = ranked.doubled_ranks.size();
  if (n == 0) throw AllZeroDifferences();

  long long w_doubled = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked.positive[i]) w_doubled += ranked.doubled_ranks[i];
  }

  WilcoxonResult r;
  r.n_effective = n;
  r.statistic = static_cast<double>(w_doubled) / 2.0;
  const bool exact = mode == WilcoxonMode::force_exact ||
                     (mode == WilcoxonMode::automatic && n <= kWilcoxonExactThreshold);
  if (exact) {
    r.method = WilcoxonMethod::exact;
    r.p_value = exact_upper_tail(ranked.doubled_ranks, w_doubled);
  } else {
    r.method = WilcoxonMethod::normal_approximation;
    r.p_value = normal_upper_tail(r.statistic, n, ranked.tie_sizes);
  }
  r.p_value = std::clamp(r.p_value, std::numeric_limits<double>::min(), 1.0);
  return r;
}

}  // namespace crclean
