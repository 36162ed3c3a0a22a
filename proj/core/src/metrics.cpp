#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "goal/error.hpp"
#include "goal/evaluation.hpp"

namespace goal {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InvalidInput("auc: " + std::to_string(scores.size()) +
                       " scores but " + std::to_string(labels.size()) +
                       " labels");
  }
  std::size_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw InvalidInput("auc: label at " + std::to_string(i) +
                         " is not 0 or 1");
    }
    if (!std::isfinite(scores[i])) {
      throw InvalidInput("auc: non-finite score at " + std::to_string(i));
    }
    positives += static_cast<std::size_t>(labels[i]);
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetric("auc: labels contain a single class");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Sum of midranks (1-based) of the positives; tied blocks share the
  // average rank, which counts each tied pair as one half.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t block_positives = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      block_positives += static_cast<std::size_t>(labels[order[j]]);
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += midrank * static_cast<double>(block_positives);
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - 0.5 * p * (p + 1.0);
  return u / (p * static_cast<double>(negatives));
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw InvalidInput("accuracy: " + std::to_string(predicted.size()) +
                       " predictions but " + std::to_string(truth.size()) +
                       " labels");
  }
  if (truth.empty()) throw InvalidInput("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

Eigen::MatrixXi confusion_matrix(std::span<const int> predicted,
                                 std::span<const int> truth, int classes) {
  if (predicted.size() != truth.size()) {
    throw InvalidInput("confusion_matrix: length mismatch");
  }
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(classes, classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= classes || predicted[i] < 0 ||
        predicted[i] >= classes) {
      throw InvalidInput("confusion_matrix: label out of range at " +
                         std::to_string(i));
    }
    ++counts(truth[i], predicted[i]);
  }
  return counts;
}

std::vector<int> truth_labels(const Matrix& pi, Index positive_row) {
  std::vector<int> labels(static_cast<std::size_t>(pi.cols()));
  if (pi.rows() == 2) {
    for (Index t = 0; t < pi.cols(); ++t) {
      labels[static_cast<std::size_t>(t)] = pi(positive_row, t) > 0.5 ? 1 : 0;
    }
    return labels;
  }
  for (Index t = 0; t < pi.cols(); ++t) {
    Index arg = 0;
    pi.col(t).maxCoeff(&arg);
    labels[static_cast<std::size_t>(t)] = static_cast<int>(arg);
  }
  return labels;
}

Metrics evaluate(const GaugeModel& model, const DataSet& data,
                 double threshold, Index positive_row) {
  if (model.classes() != data.classes()) {
    throw InvalidInput("evaluate: model has M=" +
                       std::to_string(model.classes()) + ", labels have M=" +
                       std::to_string(data.classes()));
  }
  const Matrix proba = predict_proba(model, data.x());
  const auto truth = truth_labels(data.pi(), positive_row);
  const auto predicted = labels_from_proba(proba, threshold, positive_row);
  const int classes = data.classes() == 2 ? 2 : static_cast<int>(data.classes());

  Metrics metrics;
  metrics.n_test = data.instances();
  metrics.accuracy = accuracy(predicted, truth);
  metrics.confusion = confusion_matrix(predicted, truth, classes);
  metrics.auc = std::numeric_limits<double>::quiet_NaN();
  if (data.classes() == 2) {
    const Vector scores = proba.row(positive_row).transpose();
    const bool both = std::find(truth.begin(), truth.end(), 0) != truth.end() &&
                      std::find(truth.begin(), truth.end(), 1) != truth.end();
    if (both) {
      metrics.auc = auc(std::span<const double>(scores.data(),
                                                static_cast<std::size_t>(scores.size())),
                        truth);
    }
  }
  return metrics;
}

}  // namespace goal
