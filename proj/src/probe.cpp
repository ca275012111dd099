#include "npiscope/probe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "npiscope/errors.hpp"
#include "npiscope/extraction.hpp"
#include "npiscope/rng.hpp"

namespace npiscope::probe {

namespace {

Eigen::MatrixXd softmax_rows(Eigen::MatrixXd logits) {
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    Eigen::ArrayXd row = logits.row(r).array();
    row -= row.maxCoeff();
    row = row.exp();
    logits.row(r) = (row / row.sum()).matrix();
  }
  return logits;
}

}  // namespace

std::array<std::int64_t, kNumClasses> ConfusionMatrix::column_totals() const {
  std::array<std::int64_t, kNumClasses> totals{};
  for (int c = 0; c < kNumClasses; ++c) totals[static_cast<std::size_t>(c)] = counts.col(c).sum();
  return totals;
}

TrainedProbe train_probe(const std::vector<FeaturePoint>& points, std::uint64_t split_seed,
                         const ProbeHyper& hyper) {
  if (points.empty()) throw DegenerateData("no training points");
  const Eigen::Index d = points.front().features.size();
  for (const auto& p : points) {
    if (p.features.size() != d)
      throw DimensionMismatch("feature vectors have inconsistent dimensions");
    if (p.label < 1 || p.label > kNumClasses) throw DataError("label outside 1..5");
  }

  // sentence-level split
  std::set<int> sentence_set;
  for (const auto& p : points) sentence_set.insert(p.sentence_id);
  std::vector<int> sentences(sentence_set.begin(), sentence_set.end());
  SplitMix64 rng(split_seed);
  rng.shuffle(sentences);
  const std::size_t n_train =
      static_cast<std::size_t>(std::llround(hyper.train_fraction * static_cast<double>(sentences.size())));
  std::set<int> train_ids(sentences.begin(), sentences.begin() + static_cast<std::ptrdiff_t>(n_train));

  std::vector<const FeaturePoint*> train;
  TrainedProbe out;
  for (const auto& p : points) {
    if (train_ids.contains(p.sentence_id))
      train.push_back(&p);
    else
      out.held_out.push_back(p);
  }
  if (train.empty()) throw DegenerateData("empty training split");

  std::set<int> labels;
  for (const auto* p : train) labels.insert(p->label);
  if (labels.size() < 2) throw DegenerateData("training split contains a single class");

  const Eigen::Index n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXd X(n, d);
  std::vector<int> y(train.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    X.row(i) = train[static_cast<std::size_t>(i)]->features.transpose();
    y[static_cast<std::size_t>(i)] = train[static_cast<std::size_t>(i)]->label - 1;
  }

  ProbeModel m;
  m.weights = Eigen::MatrixXd::Zero(kNumClasses, d);
  m.bias = Eigen::VectorXd::Zero(kNumClasses);
  m.seed = split_seed;
  m.l2 = hyper.l2;

  for (int iter = 0; iter < hyper.max_iters; ++iter) {
    Eigen::MatrixXd probs = softmax_rows(X * m.weights.transpose() +
                                         Eigen::VectorXd::Ones(n) * m.bias.transpose());
    double ce = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      ce -= std::log(std::max(probs(i, y[static_cast<std::size_t>(i)]), 1e-300));
    ce /= static_cast<double>(n);
    out.loss_history.push_back(ce + 0.5 * hyper.l2 * m.weights.squaredNorm());

    for (Eigen::Index i = 0; i < n; ++i) probs(i, y[static_cast<std::size_t>(i)]) -= 1.0;
    probs /= static_cast<double>(n);
    Eigen::MatrixXd dw = probs.transpose() * X + hyper.l2 * m.weights;
    Eigen::VectorXd db = probs.colwise().sum().transpose();

    const double gnorm = std::sqrt(dw.squaredNorm() + db.squaredNorm());
    m.iterations = iter + 1;
    if (gnorm < hyper.tolerance) break;
    m.weights -= hyper.step * dw;
    m.bias -= hyper.step * db;
  }

  out.model = std::move(m);
  return out;
}

std::pair<int, Eigen::VectorXd> predict_probe(const ProbeModel& m, const Eigen::VectorXd& v) {
  if (v.size() != m.weights.cols())
    throw DimensionMismatch("feature vector does not match probe dimension");
  Eigen::ArrayXd logits = (m.weights * v + m.bias).array();
  logits -= logits.maxCoeff();
  Eigen::ArrayXd probs = logits.exp();
  probs /= probs.sum();
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k)
    if (probs(k) > probs(best)) best = k;
  return {best + 1, probs.matrix()};
}

ProbeReport evaluate_probe(const ProbeModel& m, const std::vector<FeaturePoint>& test) {
  if (test.empty()) throw EmptyTestSet();

  ProbeReport report;
  struct SentenceEval {
    bool all_correct = true;
    int first_post_position = -1;
    bool first_post_correct = false;
  };
  std::map<int, SentenceEval> sentences;

  for (const auto& p : test) {
    const int pred = predict_probe(m, p.features).first;
    report.confusion.counts(pred - 1, p.label - 1) += 1;
    auto& se = sentences[p.sentence_id];
    if (pred != p.label) se.all_correct = false;
    if (p.label == static_cast<int>(extraction::ScopeLabel::Post) &&
        (se.first_post_position < 0 || p.position < se.first_post_position)) {
      se.first_post_position = p.position;
      se.first_post_correct = pred == p.label;
    }
  }

  const auto totals = report.confusion.column_totals();
  report.token_accuracy = static_cast<double>(report.confusion.trace()) /
                          static_cast<double>(report.confusion.grand_total());
  for (int c = 0; c < kNumClasses; ++c) {
    const std::int64_t total = totals[static_cast<std::size_t>(c)];
    report.per_class_accuracy[static_cast<std::size_t>(c)] =
        total == 0 ? 0.0 : static_cast<double>(report.confusion.counts(c, c)) /
                               static_cast<double>(total);
  }

  std::int64_t exact = 0, with_post = 0, first_post_ok = 0;
  for (const auto& [id, se] : sentences) {
    if (se.all_correct) ++exact;
    if (se.first_post_position >= 0) {
      ++with_post;
      if (se.first_post_correct) ++first_post_ok;
    }
  }
  report.sentence_exact = static_cast<double>(exact) / static_cast<double>(sentences.size());
  report.first_post_scope_accuracy =
      with_post == 0 ? 0.0 : static_cast<double>(first_post_ok) / static_cast<double>(with_post);
  return report;
}

double probe_loss(const ProbeModel& m, const std::vector<FeaturePoint>& points, double l2) {
  if (points.empty()) throw EmptyTestSet();
  double ce = 0.0;
  for (const auto& p : points) {
    auto [label, probs] = predict_probe(m, p.features);
    (void)label;
    ce -= std::log(std::max(probs(p.label - 1), 1e-300));
  }
  return ce / static_cast<double>(points.size()) + 0.5 * l2 * m.weights.squaredNorm();
}

}  // namespace npiscope::probe
