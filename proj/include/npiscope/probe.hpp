#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace npiscope::probe {

inline constexpr int kNumClasses = 5;  // scope labels 1..5

struct FeaturePoint {
  int sentence_id = 0;
  int position = 0;
  int label = 1;  // gold scope label, 1..5
  Eigen::VectorXd features;
};

struct ProbeHyper {
  double l2 = 1e-4;
  double step = 0.1;
  int max_iters = 2000;
  double tolerance = 1e-6;  // gradient-norm stopping criterion
  double train_fraction = 0.9;
};

struct ProbeModel {
  Eigen::MatrixXd weights;  // 5 x d
  Eigen::VectorXd bias;     // 5
  std::uint64_t seed = 0;
  int iterations = 0;
  double l2 = 0.0;
};

struct TrainedProbe {
  ProbeModel model;
  std::vector<FeaturePoint> held_out;
  std::vector<double> loss_history;
};

/// 5x5 count grid; rows are predicted classes, columns the gold classes.
struct ConfusionMatrix {
  Eigen::Matrix<std::int64_t, kNumClasses, kNumClasses> counts =
      Eigen::Matrix<std::int64_t, kNumClasses, kNumClasses>::Zero();

  std::array<std::int64_t, kNumClasses> column_totals() const;
  std::int64_t grand_total() const { return counts.sum(); }
  std::int64_t trace() const { return counts.diagonal().sum(); }
};

struct ProbeReport {
  double token_accuracy = 0.0;
  std::array<double, kNumClasses> per_class_accuracy{};
  double sentence_exact = 0.0;
  double first_post_scope_accuracy = 0.0;
  ConfusionMatrix confusion;
};

/// Softmax regression trained by full-batch gradient descent with L2
/// regularization. Sentences are shuffled with `split_seed` and split
/// train_fraction / rest by sentence, never by token.
TrainedProbe train_probe(const std::vector<FeaturePoint>& points, std::uint64_t split_seed,
                         const ProbeHyper& hyper = {});

/// Returns (label in 1..5, class probabilities). Ties break to the
/// lowest class id.
std::pair<int, Eigen::VectorXd> predict_probe(const ProbeModel& m, const Eigen::VectorXd& v);

ProbeReport evaluate_probe(const ProbeModel& m, const std::vector<FeaturePoint>& test);

/// Mean cross-entropy plus L2 penalty over a point set; exposed for the
/// monotone-descent property check.
double probe_loss(const ProbeModel& m, const std::vector<FeaturePoint>& points, double l2);

}  // namespace npiscope::probe
