#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "npiscope/rewrite.hpp"

namespace npiscope::analysis {

using rewrite::Condition;

enum class Metric { Perplexity, Probability };

const char* metric_name(Metric m);

/// Per-sentence condition scores. Indexing follows rewrite::Condition.
/// PPI slots are meaningless when `ppi_valid` is false. The SEN fields
/// hold whole-sentence perplexities of the NPI-less control variants.
struct SentenceScores {
  int sentence_id = 0;
  int distance = 0;
  bool ppi_valid = true;
  std::array<double, 4> perplexity{};
  std::array<double, 4> probability{};
  bool has_sen = false;
  double sen_pp_neg = std::numeric_limits<double>::quiet_NaN();
  double sen_pp_pos = std::numeric_limits<double>::quiet_NaN();
};

/// Outcome of one pairwise hypothesis: the share of sentences where the
/// first condition scores better (lower perplexity, higher probability),
/// plus the per-sentence relative differences rd(first, second).
struct ComparisonRow {
  Condition first = Condition::NpiNeg;
  Condition second = Condition::NpiPos;
  Metric metric = Metric::Perplexity;
  int n = 0;
  double percent_complying = 0.0;  // in [0, 100]
  std::vector<double> rel_diffs;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  // 6 pairs x 2 metrics, canonical order
  bool has_sen_control = false;
  ComparisonRow sen_control;  // SEN_neg vs SEN_pos whole-sentence perplexity
};

/// (a - b) / ((a + b) / 2): bounded contrast measure in [-2, 2].
double relative_difference(double a, double b);

/// The six unordered condition pairs under both metrics; ties count as
/// non-complying, and PPI-involving pairs skip sentences whose PPI
/// variants are invalid.
ComparisonReport compare_conditions(std::span<const SentenceScores> scores);

/// Buckets are [edges[i], edges[i+1]) with a final open [edges.back(), inf).
struct DistanceBucket {
  int lo = 0;
  int hi = 0;  // exclusive; INT_MAX for the last bucket
  int n = 0;
  bool empty = false;
  ComparisonReport report;
};

std::vector<DistanceBucket> bucket_by_distance(std::span<const SentenceScores> scores,
                                               std::span<const int> edges);

/// Pearson correlation of rank vectors; ties share averaged ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Tie-adjusted Kendall tau-b.
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Fixed-width histogram of relative differences over [-2, 2].
std::vector<std::int64_t> rel_diff_histogram(std::span<const double> values, int bins = 40);

}  // namespace npiscope::analysis
