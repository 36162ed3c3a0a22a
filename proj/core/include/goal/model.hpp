#ifndef GOAL_MODEL_HPP
#define GOAL_MODEL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goal/matrix.hpp"

namespace goal {

/// Features X (D x T, one column per instance) and label probabilities
/// Pi (M x T, column-stochastic). Immutable once constructed.
class DataSet {
 public:
  /// Validates finiteness, matching T, Pi entries in [0,1] and column sums
  /// equal to 1 within 1e-12. Throws InvalidInput otherwise.
  DataSet(Matrix features, Matrix label_probabilities);

  const Matrix& x() const noexcept { return x_; }
  const Matrix& pi() const noexcept { return pi_; }
  Index dims() const noexcept { return x_.rows(); }
  Index instances() const noexcept { return x_.cols(); }
  Index classes() const noexcept { return pi_.rows(); }

  /// Instances at `indices`, in the given order.
  DataSet subset(std::span<const Index> indices) const;

  /// Two-row one-hot Pi from 0/1 labels. Row `positive_row` holds label 1.
  static Matrix one_hot_binary(std::span<const int> labels,
                               Index positive_row = 0);

 private:
  Matrix x_;
  Matrix pi_;
};

/// Hard assignment of each instance to one of K boxes: the discrete
/// affiliation matrix stored as a label per instance.
class Affiliation {
 public:
  Affiliation() = default;
  Affiliation(Index clusters, std::vector<Index> assignment);

  /// From a K x T 0/1 matrix with one-hot columns; throws InvalidInput
  /// otherwise.
  static Affiliation from_matrix(const Matrix& gamma);
  static Affiliation random(Index clusters, Index instances,
                            std::uint64_t seed);

  Index clusters() const noexcept { return clusters_; }
  Index instances() const noexcept {
    return static_cast<Index>(assignment_.size());
  }
  Index operator[](Index t) const { return assignment_[static_cast<std::size_t>(t)]; }
  const std::vector<Index>& assignment() const noexcept { return assignment_; }

  std::vector<Index> occupancy() const;
  Matrix to_matrix() const;

  bool operator==(const Affiliation&) const = default;

 private:
  Index clusters_ = 1;
  std::vector<Index> assignment_;
};

struct GaugeModel {
  Matrix r;       // D x G, orthonormal columns
  Matrix s;       // G x K, box coordinates in the gauge
  Matrix lambda;  // M x K, column-stochastic
  double eps_cl = 0.0;
  double lambda_floor = 1e-12;

  Index dims() const noexcept { return r.rows(); }
  Index gauge() const noexcept { return r.cols(); }
  Index clusters() const noexcept { return s.cols(); }
  Index classes() const noexcept { return lambda.rows(); }

  /// Box images R * S in feature space (D x K).
  Matrix box_images() const { return r * s; }

  /// Throws InvalidInput if shapes disagree or R / Lambda leave their
  /// feasible sets (tolerances 1e-8 and 1e-12).
  void validate() const;
};

struct FitConfig {
  Index clusters = 2;  // K
  Index gauge = 2;     // G
  double eps_cl = 1.0;
  // Accepted for compatibility with the published algorithm's input list;
  // it appears in no step and is ignored.
  std::optional<double> eps_e;
  double tol = 1e-8;
  double lambda_floor = 1e-12;
  int max_iter = 500;
  int n_restarts = 10;
  std::uint64_t seed = 0;

  /// Throws ConfigError on invalid values. `dims` enables the G <= D check.
  void validate(std::optional<Index> dims = std::nullopt) const;
};

struct FitReport {
  std::vector<double> objective_trace;  // best restart, one entry per iteration
  std::vector<int> reseed_iterations;   // 0-based indices into the trace
  int iterations = 0;
  bool converged = false;
  int restart_index_of_best = 0;
  std::vector<double> restart_objectives;  // final objective per restart
  std::vector<std::string> warnings;
  double iteration_seconds = 0.0;  // best restart, loop body only
};

struct FitResult {
  GaugeModel model;
  Affiliation gamma;
  FitReport report;
};

struct SStepResult {
  Matrix box_means;  // RS: D x K cluster means
  Matrix s;          // G x K, Rᵀ * box_means
  std::vector<Index> reseeded;
};

/// Discrete objective. Uses log(max(Lambda, lambda_floor)).
double objective(const DataSet& data, const GaugeModel& model,
                 const Affiliation& gamma);

/// Euclidean part of the objective alone: mean squared distance of each
/// instance to the image of its box.
double discretization_error(const Matrix& x, const Matrix& box_images,
                            const Affiliation& gamma);

/// Cluster means and their gauge coordinates. An empty cluster is re-seeded
/// at the instance farthest from its own cluster mean.
SStepResult s_step(const DataSet& data, const Affiliation& gamma,
                   const Matrix& r);

/// Per-instance argmin of squared distance to `box_images` (D x K) minus
/// (eps_cl / M) * sum_m Pi log(max(Lambda, floor)). Ties go to the smallest
/// box index.
Affiliation gamma_step(const DataSet& data, const Matrix& box_images,
                       const Matrix& lambda, double eps_cl,
                       double lambda_floor);

/// Column-normalized Pi * Gammaᵀ; empty boxes get the uniform column.
Matrix lambda_step(const DataSet& data, const Affiliation& gamma);

/// Orthonormal R maximizing tr(Rᵀ X Gammaᵀ Sᵀ), i.e. minimizing
/// ||X - R S Gamma||_F. If X Gammaᵀ Sᵀ is rank deficient the trailing
/// columns are completed deterministically from `completion_seed`.
Matrix r_step(const DataSet& data, const Affiliation& gamma, const Matrix& s,
              std::uint64_t completion_seed = 0);

/// One alternating-minimization run from a single random start.
struct RestartResult {
  GaugeModel model;
  Affiliation gamma;
  std::vector<double> trace;
  std::vector<int> reseed_iterations;
  bool converged = false;
  double iteration_seconds = 0.0;
};

/// Runs the S / Gamma / Lambda / R / objective loop from the start derived
/// from `seed`. With `stop_on_convergence` false, exactly `max_iter`
/// iterations run (used to time per-iteration cost).
RestartResult run_restart(const DataSet& data, const FitConfig& config,
                          std::uint64_t seed, bool stop_on_convergence = true);

/// Best of `config.n_restarts` runs by final objective.
FitResult fit(const DataSet& data, const FitConfig& config);

/// Euclidean nearest box image for each column of `x` (labels unknown).
std::vector<Index> assign_boxes(const GaugeModel& model, const Matrix& x);

/// M x T' matrix whose column t is Lambda's column for the nearest box.
Matrix predict_proba(const GaugeModel& model, const Matrix& x);

/// For M == 2: 1 when the probability in `positive_row` exceeds `threshold`
/// (strictly), else 0. For M != 2: the argmax row index (threshold unused).
std::vector<int> predict_labels(const GaugeModel& model, const Matrix& x,
                                double threshold = 0.5,
                                Index positive_row = 0);

/// Same rule applied to an already computed probability matrix.
std::vector<int> labels_from_proba(const Matrix& proba, double threshold = 0.5,
                                   Index positive_row = 0);

}  // namespace goal

#endif  // GOAL_MODEL_HPP
