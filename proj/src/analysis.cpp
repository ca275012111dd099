#include "npiscope/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "npiscope/errors.hpp"

namespace npiscope::analysis {

const char* metric_name(Metric m) {
  return m == Metric::Perplexity ? "perplexity" : "probability";
}

double relative_difference(double a, double b) {
  if (a < 0.0 || b < 0.0) throw DataError("relative difference requires non-negative inputs");
  if (a + b == 0.0) throw BothZero();
  return (a - b) / ((a + b) / 2.0);
}

namespace {

constexpr std::array<std::pair<Condition, Condition>, 6> kPairs = {{
    {Condition::NpiNeg, Condition::NpiPos},
    {Condition::NpiNeg, Condition::PpiNeg},
    {Condition::NpiNeg, Condition::PpiPos},
    {Condition::NpiPos, Condition::PpiNeg},
    {Condition::NpiPos, Condition::PpiPos},
    {Condition::PpiNeg, Condition::PpiPos},
}};

bool needs_ppi(Condition c) {
  return c == Condition::PpiNeg || c == Condition::PpiPos;
}

ComparisonReport compare_impl(std::span<const SentenceScores> scores, bool strict) {
  ComparisonReport report;
  for (Metric metric : {Metric::Perplexity, Metric::Probability}) {
    for (const auto& [first, second] : kPairs) {
      ComparisonRow row;
      row.first = first;
      row.second = second;
      row.metric = metric;
      std::int64_t comply = 0;
      for (const auto& s : scores) {
        if (!s.ppi_valid && (needs_ppi(first) || needs_ppi(second))) continue;
        const auto& values = metric == Metric::Perplexity ? s.perplexity : s.probability;
        const double a = values[static_cast<std::size_t>(first)];
        const double b = values[static_cast<std::size_t>(second)];
        row.rel_diffs.push_back(relative_difference(a, b));
        const bool better = metric == Metric::Perplexity ? a < b : a > b;
        if (better) ++comply;
        ++row.n;
      }
      if (row.n == 0 && strict)
        throw NoValidPairs(std::string("no valid sentences for pair ") +
                           rewrite::condition_name(first) + " vs " +
                           rewrite::condition_name(second));
      row.percent_complying =
          row.n == 0 ? 0.0 : 100.0 * static_cast<double>(comply) / static_cast<double>(row.n);
      report.rows.push_back(std::move(row));
    }
  }

  ComparisonRow control;
  control.first = Condition::NpiNeg;
  control.second = Condition::NpiPos;
  control.metric = Metric::Perplexity;
  std::int64_t comply = 0;
  for (const auto& s : scores) {
    if (!s.has_sen) continue;
    control.rel_diffs.push_back(relative_difference(s.sen_pp_neg, s.sen_pp_pos));
    if (s.sen_pp_neg < s.sen_pp_pos) ++comply;
    ++control.n;
  }
  if (control.n > 0) {
    control.percent_complying =
        100.0 * static_cast<double>(comply) / static_cast<double>(control.n);
    report.has_sen_control = true;
    report.sen_control = std::move(control);
  }
  return report;
}

}  // namespace

ComparisonReport compare_conditions(std::span<const SentenceScores> scores) {
  if (scores.empty()) throw NoValidPairs("no scored sentences");
  return compare_impl(scores, /*strict=*/true);
}

std::vector<DistanceBucket> bucket_by_distance(std::span<const SentenceScores> scores,
                                               std::span<const int> edges) {
  if (edges.empty()) throw ConfigInvalid("bucket edges must be non-empty");
  if (!std::is_sorted(edges.begin(), edges.end()))
    throw ConfigInvalid("bucket edges must be sorted ascending");

  std::vector<DistanceBucket> buckets;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    DistanceBucket b;
    b.lo = edges[i];
    b.hi = i + 1 < edges.size() ? edges[i + 1] : std::numeric_limits<int>::max();
    buckets.push_back(std::move(b));
  }

  std::vector<std::vector<SentenceScores>> grouped(buckets.size());
  for (const auto& s : scores) {
    for (std::size_t i = 0; i < buckets.size(); ++i) {
      if (s.distance >= buckets[i].lo && s.distance < buckets[i].hi) {
        grouped[i].push_back(s);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    buckets[i].n = static_cast<int>(grouped[i].size());
    buckets[i].empty = grouped[i].empty();
    if (!grouped[i].empty()) buckets[i].report = compare_impl(grouped[i], /*strict=*/false);
  }
  return buckets;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw LengthMismatch("correlation inputs differ in length: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
  if (x.size() < 2) throw LengthMismatch("correlation requires at least 2 points");
}

bool all_equal(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  if (all_equal(x) || all_equal(y)) throw ConstantInput("constant input to spearman_rho");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  return cov / std::sqrt(vx * vy);
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  if (all_equal(x) || all_equal(y)) throw ConstantInput("constant input to kendall_tau");
  std::int64_t concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
  const double denom = std::sqrt((n0 - static_cast<double>(ties_x)) *
                                 (n0 - static_cast<double>(ties_y)));
  return static_cast<double>(concordant - discordant) / denom;
}

std::vector<std::int64_t> rel_diff_histogram(std::span<const double> values, int bins) {
  std::vector<std::int64_t> hist(static_cast<std::size_t>(bins), 0);
  const double width = 4.0 / static_cast<double>(bins);
  for (double v : values) {
    int b = static_cast<int>(std::floor((v + 2.0) / width));
    b = std::clamp(b, 0, bins - 1);
    ++hist[static_cast<std::size_t>(b)];
  }
  return hist;
}

}  // namespace npiscope::analysis
