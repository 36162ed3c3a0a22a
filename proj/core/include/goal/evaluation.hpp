#ifndef GOAL_EVALUATION_HPP
#define GOAL_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goal/matrix.hpp"
#include "goal/model.hpp"

namespace goal {

// ---------------------------------------------------------------- metrics

/// Mann-Whitney AUC: probability that a random positive outscores a random
/// negative, ties counted one half. Labels are 0/1. Throws UndefinedMetric
/// if either class is absent.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Fraction of equal entries. Throws InvalidInput on length mismatch or
/// empty input.
double accuracy(std::span<const int> predicted, std::span<const int> truth);

/// classes x classes counts; rows = truth, columns = prediction.
Eigen::MatrixXi confusion_matrix(std::span<const int> predicted,
                                 std::span<const int> truth, int classes);

struct Metrics {
  double auc = 0.0;  // NaN when undefined (single-class test set)
  double accuracy = 0.0;
  Eigen::MatrixXi confusion;
  Index n_test = 0;
};

/// Hard labels from Pi: for M == 2, 1 where the `positive_row` probability
/// exceeds 1/2; otherwise the argmax row.
std::vector<int> truth_labels(const Matrix& pi, Index positive_row = 0);

/// Scores the model on `data`. AUC uses the `positive_row` probability and
/// is only computed for M == 2.
Metrics evaluate(const GaugeModel& model, const DataSet& data,
                 double threshold = 0.5, Index positive_row = 0);

// ----------------------------------------------------------------- splits

enum class SplitKind { kRandomHoldout, kKFold, kTemporal };

std::string to_string(SplitKind kind);
SplitKind split_kind_from_string(const std::string& name);

struct SplitPlan {
  SplitKind kind = SplitKind::kRandomHoldout;
  double train_fraction = 0.75;      // holdout and temporal
  double validation_fraction = 0.0;  // carved from the training part
  int folds = 5;                     // kfold
  int replicates = 1;                // random holdout repetitions
  bool stratified = false;
  std::uint64_t seed = 0;

  void validate(Index instances) const;
};

struct Split {
  std::vector<Index> train;
  std::vector<Index> validation;  // empty unless validation_fraction > 0
  std::vector<Index> test;
};

/// Deterministic for a fixed seed. `labels` (one class id per instance) is
/// required when the plan is stratified. Temporal splits are never shuffled.
std::vector<Split> make_splits(Index instances, const SplitPlan& plan,
                               std::span<const int> labels = {});

// ------------------------------------------------------------ grid search

/// Entries of R, S and Lambda: D*G + G*K + M*K.
Index parameter_count(const FitConfig& config, Index dims, Index classes);

struct GridSpec {
  std::vector<Index> clusters;
  std::vector<Index> gauges;
  std::vector<double> eps_cl;
  FitConfig base;  // everything except K, G, eps_cl

  /// Cartesian product in K-major, then G, then eps_cl order.
  std::vector<FitConfig> candidates() const;
  void validate(Index dims) const;
};

struct SplitOutcome {
  double test_auc = 0.0;
  double test_accuracy = 0.0;
  double validation_auc = 0.0;  // NaN without a validation part
  double fit_seconds = 0.0;
  double objective = 0.0;
};

struct GridRow {
  FitConfig config;
  Index parameters = 0;
  bool failed = false;
  std::string error;
  std::vector<SplitOutcome> splits;
  double mean_auc = 0.0;
  double auc_ci95 = 0.0;  // 1.96 * standard error of the split AUCs
  double mean_accuracy = 0.0;
  double mean_validation_auc = 0.0;
  double mean_fit_seconds = 0.0;
};

struct GridResult {
  std::vector<GridRow> rows;
  std::size_t best = 0;
  bool selected_on_validation = false;
  std::size_t fits = 0;

  const GridRow& best_row() const { return rows.at(best); }
};

/// Fits every candidate on every split's training part and scores the test
/// part. Without a validation part the selection metric is the test AUC,
/// which is optimistic. Tasks run on `workers` threads (0 = default).
GridResult grid_search(const DataSet& data, const GridSpec& grid,
                       const SplitPlan& plan, Index positive_row = 0,
                       unsigned workers = 0);

/// Recomputes a row's means from its per-split outcomes.
void aggregate_row(GridRow& row);

}  // namespace goal

#endif  // GOAL_EVALUATION_HPP
