#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "goal/error.hpp"
#include "goal/model.hpp"
#include "goal/numerics.hpp"

namespace goal {

namespace {

void require_affiliation(const Affiliation& gamma, Index instances,
                         std::string_view what) {
  if (gamma.instances() != instances) {
    throw InvalidInput(std::string(what) + ": affiliation covers " +
                       std::to_string(gamma.instances()) +
                       " instances, data has " + std::to_string(instances));
  }
}

// log(max(Lambda, floor)), M x K.
Matrix floored_log(const Matrix& lambda, double floor) {
  return lambda.array().max(floor).log().matrix();
}

// Squared distance to every box image minus the per-instance constant
// ||x_t||^2, which does not affect the argmin (K x T).
Matrix shifted_distances(const Matrix& x, const Matrix& images) {
  Matrix d = -2.0 * (images.transpose() * x);
  d.colwise() += images.colwise().squaredNorm().transpose();
  return d;
}

// Cluster sums X * Gammaᵀ (D x K).
Matrix cluster_sums(const Matrix& x, const Affiliation& gamma) {
  Matrix sums = Matrix::Zero(x.rows(), gamma.clusters());
  for (Index t = 0; t < x.cols(); ++t) sums.col(gamma[t]) += x.col(t);
  return sums;
}

}  // namespace

void GaugeModel::validate() const {
  const Index d = r.rows();
  const Index g = r.cols();
  const Index k = s.cols();
  if (d < 1 || g < 1 || k < 1 || lambda.rows() < 1) {
    throw InvalidInput("model: empty parameter matrix");
  }
  require_shape(s, g, k, "model S");
  require_shape(lambda, lambda.rows(), k, "model Lambda");
  require_finite(r, "model R");
  require_finite(s, "model S");
  require_finite(lambda, "model Lambda");
  if (orthonormality_defect(r) > 1e-8) {
    throw InvalidInput("model: R does not have orthonormal columns");
  }
  if ((lambda.array() < 0.0).any() || (lambda.array() > 1.0).any() ||
      column_sum_defect(lambda) > 1e-12) {
    throw InvalidInput("model: Lambda is not column-stochastic");
  }
  if (!(eps_cl >= 0.0) || !(lambda_floor > 0.0 && lambda_floor < 1.0)) {
    throw InvalidInput("model: eps_cl must be >= 0 and lambda_floor in (0,1)");
  }
}

double discretization_error(const Matrix& x, const Matrix& box_images,
                            const Affiliation& gamma) {
  if (box_images.rows() != x.rows() ||
      box_images.cols() != gamma.clusters()) {
    throw InvalidInput("discretization_error: box images have wrong shape");
  }
  require_affiliation(gamma, x.cols(), "discretization_error");
  double total = 0.0;
  for (Index t = 0; t < x.cols(); ++t) {
    total += (x.col(t) - box_images.col(gamma[t])).squaredNorm();
  }
  return total / static_cast<double>(x.cols());
}

double objective(const DataSet& data, const GaugeModel& model,
                 const Affiliation& gamma) {
  const Index k = gamma.clusters();
  if (model.r.rows() != data.dims() || model.s.rows() != model.r.cols() ||
      model.s.cols() != k || model.lambda.rows() != data.classes() ||
      model.lambda.cols() != k) {
    throw InvalidInput("objective: model dimensions do not match data");
  }
  require_affiliation(gamma, data.instances(), "objective");

  const double euclidean =
      discretization_error(data.x(), model.box_images(), gamma);
  if (model.eps_cl == 0.0) return euclidean;

  const Matrix log_lambda = floored_log(model.lambda, model.lambda_floor);
  double cross_entropy = 0.0;
  for (Index t = 0; t < data.instances(); ++t) {
    cross_entropy += data.pi().col(t).dot(log_lambda.col(gamma[t]));
  }
  const double scale = model.eps_cl / static_cast<double>(data.instances() *
                                                          data.classes());
  return euclidean - scale * cross_entropy;
}

SStepResult s_step(const DataSet& data, const Affiliation& gamma,
                   const Matrix& r) {
  require_affiliation(gamma, data.instances(), "s_step");
  if (r.rows() != data.dims()) {
    throw InvalidInput("s_step: R has " + std::to_string(r.rows()) +
                       " rows, data has D=" + std::to_string(data.dims()));
  }
  const Matrix& x = data.x();
  const auto counts = gamma.occupancy();

  SStepResult out;
  out.box_means = cluster_sums(x, gamma);
  for (Index k = 0; k < gamma.clusters(); ++k) {
    const auto n = counts[static_cast<std::size_t>(k)];
    if (n > 0) out.box_means.col(k) /= static_cast<double>(n);
  }

  if (std::find(counts.begin(), counts.end(), 0) != counts.end()) {
    // Distance of every instance to the mean of its own box.
    std::vector<double> spread(static_cast<std::size_t>(x.cols()));
    for (Index t = 0; t < x.cols(); ++t) {
      spread[static_cast<std::size_t>(t)] =
          (x.col(t) - out.box_means.col(gamma[t])).squaredNorm();
    }
    std::vector<bool> taken(spread.size(), false);
    for (Index k = 0; k < gamma.clusters(); ++k) {
      if (counts[static_cast<std::size_t>(k)] > 0) continue;
      if (std::find(taken.begin(), taken.end(), false) == taken.end()) {
        std::fill(taken.begin(), taken.end(), false);
      }
      std::size_t far = 0;
      double best = -1.0;
      for (std::size_t t = 0; t < spread.size(); ++t) {
        if (!taken[t] && spread[t] > best) {
          best = spread[t];
          far = t;
        }
      }
      taken[far] = true;
      out.box_means.col(k) = x.col(static_cast<Index>(far));
      out.reseeded.push_back(k);
    }
  }

  out.s = r.transpose() * out.box_means;
  return out;
}

Affiliation gamma_step(const DataSet& data, const Matrix& box_images,
                       const Matrix& lambda, double eps_cl,
                       double lambda_floor) {
  const Index k = box_images.cols();
  if (box_images.rows() != data.dims() || k < 1) {
    throw InvalidInput("gamma_step: box images must be D x K");
  }
  require_shape(lambda, data.classes(), k, "gamma_step Lambda");

  // label_cost(k, t) = -(eps_cl / M) * sum_m Pi(m,t) log(max(Lambda(m,k), floor))
  Matrix label_cost;
  const bool use_labels = eps_cl != 0.0;
  if (use_labels) {
    label_cost = floored_log(lambda, lambda_floor).transpose() * data.pi();
    label_cost *= -eps_cl / static_cast<double>(data.classes());
  }

  Matrix score = shifted_distances(data.x(), box_images);
  if (use_labels) score += label_cost;
  std::vector<Index> assignment(static_cast<std::size_t>(score.cols()));
  for (Index t = 0; t < score.cols(); ++t) {
    Index best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < k; ++c) {
      if (score(c, t) < best) {
        best = score(c, t);
        best_k = c;
      }
    }
    assignment[static_cast<std::size_t>(t)] = best_k;
  }
  return Affiliation(k, std::move(assignment));
}

Matrix lambda_step(const DataSet& data, const Affiliation& gamma) {
  require_affiliation(gamma, data.instances(), "lambda_step");
  const Index m = data.classes();
  Matrix joint = Matrix::Zero(m, gamma.clusters());
  for (Index t = 0; t < data.instances(); ++t) {
    joint.col(gamma[t]) += data.pi().col(t);
  }
  for (Index k = 0; k < joint.cols(); ++k) {
    const double mass = joint.col(k).sum();
    if (mass > 0.0) {
      joint.col(k) /= mass;
    } else {
      joint.col(k).setConstant(1.0 / static_cast<double>(m));
    }
  }
  return joint;
}

Matrix r_step(const DataSet& data, const Affiliation& gamma, const Matrix& s,
              std::uint64_t completion_seed) {
  require_affiliation(gamma, data.instances(), "r_step");
  const Index g = s.rows();
  if (s.cols() != gamma.clusters() || g < 1) {
    throw InvalidInput("r_step: S must be G x K");
  }
  if (g > data.dims()) {
    throw InvalidInput("r_step: G=" + std::to_string(g) + " exceeds D=" +
                       std::to_string(data.dims()));
  }

  // Procrustes target X Gammaᵀ Sᵀ (D x G).
  const Matrix target = cluster_sums(data.x(), gamma) * s.transpose();
  if (!target.allFinite()) {
    throw NumericalError("r_step: Procrustes target overflowed");
  }
  ThinSvd svd = thin_svd(target);

  const double largest = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
  const double cutoff = largest * static_cast<double>(data.dims()) *
                        std::numeric_limits<double>::epsilon();
  Index rank = 0;
  while (rank < svd.sigma.size() && largest > 0.0 &&
         svd.sigma(rank) > cutoff) {
    ++rank;
  }
  if (rank < g) complete_orthonormal(svd.u, rank, completion_seed);

  return svd.u * svd.v.transpose();
}

std::vector<Index> assign_boxes(const GaugeModel& model, const Matrix& x) {
  if (x.rows() != model.dims()) {
    throw InvalidInput("predict: features have " + std::to_string(x.rows()) +
                       " rows, model expects D=" +
                       std::to_string(model.dims()));
  }
  require_finite(x, "predict features");
  const Matrix dist = shifted_distances(x, model.box_images());
  std::vector<Index> boxes(static_cast<std::size_t>(x.cols()));
  for (Index t = 0; t < x.cols(); ++t) {
    Index best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < dist.rows(); ++k) {
      if (dist(k, t) < best) {
        best = dist(k, t);
        best_k = k;
      }
    }
    boxes[static_cast<std::size_t>(t)] = best_k;
  }
  return boxes;
}

Matrix predict_proba(const GaugeModel& model, const Matrix& x) {
  const auto boxes = assign_boxes(model, x);
  Matrix proba(model.classes(), x.cols());
  for (Index t = 0; t < x.cols(); ++t) {
    proba.col(t) = model.lambda.col(boxes[static_cast<std::size_t>(t)]);
  }
  return proba;
}

std::vector<int> labels_from_proba(const Matrix& proba, double threshold,
                                   Index positive_row) {
  std::vector<int> labels(static_cast<std::size_t>(proba.cols()));
  if (proba.rows() == 2) {
    if (positive_row != 0 && positive_row != 1) {
      throw InvalidInput("predict_labels: positive row must be 0 or 1");
    }
    for (Index t = 0; t < proba.cols(); ++t) {
      labels[static_cast<std::size_t>(t)] =
          proba(positive_row, t) > threshold ? 1 : 0;
    }
    return labels;
  }
  for (Index t = 0; t < proba.cols(); ++t) {
    Index arg = 0;
    proba.col(t).maxCoeff(&arg);
    labels[static_cast<std::size_t>(t)] = static_cast<int>(arg);
  }
  return labels;
}

std::vector<int> predict_labels(const GaugeModel& model, const Matrix& x,
                                double threshold, Index positive_row) {
  if (model.classes() == 2 && !(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidInput("predict_labels: threshold must lie in (0, 1)");
  }
  return labels_from_proba(predict_proba(model, x), threshold, positive_row);
}

}  // namespace goal
