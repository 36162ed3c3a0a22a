#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "goal/error.hpp"
#include "goal/evaluation.hpp"
#include "goal/parallel.hpp"

namespace goal {

Index parameter_count(const FitConfig& config, Index dims, Index classes) {
  return dims * config.gauge + config.gauge * config.clusters +
         classes * config.clusters;
}

std::vector<FitConfig> GridSpec::candidates() const {
  std::vector<FitConfig> out;
  for (Index k : clusters) {
    for (Index g : gauges) {
      for (double eps : eps_cl) {
        FitConfig config = base;
        config.clusters = k;
        config.gauge = g;
        config.eps_cl = eps;
        out.push_back(config);
      }
    }
  }
  return out;
}

void GridSpec::validate(Index dims) const {
  if (clusters.empty() || gauges.empty() || eps_cl.empty()) {
    throw ConfigError("grid: K, G and eps_cl lists must be non-empty");
  }
  for (const FitConfig& config : candidates()) config.validate(dims);
}

void aggregate_row(GridRow& row) {
  const auto n = static_cast<double>(row.splits.size());
  row.mean_auc = row.mean_accuracy = row.mean_validation_auc =
      row.mean_fit_seconds = row.auc_ci95 = 0.0;
  if (row.splits.empty()) return;
  for (const SplitOutcome& s : row.splits) {
    row.mean_auc += s.test_auc;
    row.mean_accuracy += s.test_accuracy;
    row.mean_validation_auc += s.validation_auc;
    row.mean_fit_seconds += s.fit_seconds;
  }
  row.mean_auc /= n;
  row.mean_accuracy /= n;
  row.mean_validation_auc /= n;
  row.mean_fit_seconds /= n;
  if (row.splits.size() > 1) {
    double ss = 0.0;
    for (const SplitOutcome& s : row.splits) {
      ss += (s.test_auc - row.mean_auc) * (s.test_auc - row.mean_auc);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    row.auc_ci95 = 1.96 * sd / std::sqrt(n);
  }
}

GridResult grid_search(const DataSet& data, const GridSpec& grid,
                       const SplitPlan& plan, Index positive_row,
                       unsigned workers) {
  grid.validate(data.dims());
  if (data.classes() != 2) {
    throw ConfigError("grid search ranks candidates by AUC and needs M = 2");
  }
  const auto labels = truth_labels(data.pi(), positive_row);
  const auto splits = make_splits(data.instances(), plan, labels);

  struct Parts {
    DataSet train, validation, test;
    bool has_validation;
  };
  std::vector<Parts> parts;
  parts.reserve(splits.size());
  for (const Split& split : splits) {
    const bool has_validation = !split.validation.empty();
    parts.push_back(Parts{
        data.subset(split.train),
        has_validation ? data.subset(split.validation) : data.subset(split.test),
        data.subset(split.test), has_validation});
  }

  GridResult result;
  for (const FitConfig& config : grid.candidates()) {
    GridRow row;
    row.config = config;
    row.parameters = parameter_count(config, data.dims(), data.classes());
    row.splits.resize(splits.size());
    result.rows.push_back(std::move(row));
  }
  result.selected_on_validation = plan.validation_fraction > 0.0;

  const std::size_t per_row = splits.size();
  const std::size_t tasks = result.rows.size() * per_row;
  std::vector<std::string> errors(tasks);
  parallel_for(tasks, workers, [&](std::size_t task) {
    GridRow& row = result.rows[task / per_row];
    const Parts& part = parts[task % per_row];
    SplitOutcome& outcome = row.splits[task % per_row];
    try {
      const auto start = std::chrono::steady_clock::now();
      FitResult fitted = fit(part.train, row.config);
      outcome.fit_seconds = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
      outcome.objective = fitted.report.objective_trace.back();
      const Metrics test = evaluate(fitted.model, part.test, 0.5, positive_row);
      if (std::isnan(test.auc)) {
        throw UndefinedMetric("test split " + std::to_string(task % per_row) +
                              " contains a single class");
      }
      outcome.test_auc = test.auc;
      outcome.test_accuracy = test.accuracy;
      outcome.validation_auc = std::numeric_limits<double>::quiet_NaN();
      if (part.has_validation) {
        outcome.validation_auc =
            evaluate(fitted.model, part.validation, 0.5, positive_row).auc;
        if (std::isnan(outcome.validation_auc)) {
          throw UndefinedMetric("validation split " +
                                std::to_string(task % per_row) +
                                " contains a single class");
        }
      }
    } catch (const std::exception& e) {
      errors[task] = e.what();
    }
  });
  result.fits = tasks;

  bool have_best = false;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    GridRow& row = result.rows[i];
    for (std::size_t s = 0; s < per_row; ++s) {
      if (!errors[i * per_row + s].empty() && !row.failed) {
        row.failed = true;
        row.error = errors[i * per_row + s];
      }
    }
    if (row.failed) continue;
    aggregate_row(row);

    // Ties: fewer parameters, then earlier grid position.
    const auto score = [&](const GridRow& r) {
      return result.selected_on_validation ? r.mean_validation_auc : r.mean_auc;
    };
    if (!have_best) {
      result.best = i;
      have_best = true;
      continue;
    }
    const GridRow& best = result.rows[result.best];
    if (score(row) > score(best) ||
        (score(row) == score(best) && row.parameters < best.parameters)) {
      result.best = i;
    }
  }
  if (!have_best) {
    throw InvalidInput("grid search: every candidate failed; first error: " +
                       result.rows.front().error);
  }
  return result;
}

}  // namespace goal
