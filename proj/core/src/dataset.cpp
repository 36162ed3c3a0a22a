#include <cmath>
#include <string>

#include "goal/error.hpp"
#include "goal/model.hpp"
#include "goal/numerics.hpp"

namespace goal {

DataSet::DataSet(Matrix features, Matrix label_probabilities)
    : x_(std::move(features)), pi_(std::move(label_probabilities)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw InvalidInput("dataset: need D >= 1 and T >= 1, got D=" +
                       std::to_string(x_.rows()) +
                       " T=" + std::to_string(x_.cols()));
  }
  if (pi_.rows() < 1) throw InvalidInput("dataset: Pi has no rows");
  if (pi_.cols() != x_.cols()) {
    throw InvalidInput("dataset: X has " + std::to_string(x_.cols()) +
                       " instances but Pi has " + std::to_string(pi_.cols()));
  }
  require_finite(x_, "dataset X");
  require_finite(pi_, "dataset Pi");
  for (Index t = 0; t < pi_.cols(); ++t) {
    for (Index m = 0; m < pi_.rows(); ++m) {
      if (pi_(m, t) < 0.0 || pi_(m, t) > 1.0) {
        throw InvalidInput("dataset: Pi(" + std::to_string(m) + ", " +
                           std::to_string(t) + ") outside [0, 1]");
      }
    }
    const double sum = pi_.col(t).sum();
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidInput("dataset: Pi column " + std::to_string(t) +
                         " sums to " + std::to_string(sum));
    }
  }
}

DataSet DataSet::subset(std::span<const Index> indices) const {
  Matrix x(x_.rows(), static_cast<Index>(indices.size()));
  Matrix pi(pi_.rows(), static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const Index t = indices[j];
    if (t < 0 || t >= instances()) {
      throw InvalidInput("dataset subset: index " + std::to_string(t) +
                         " out of range");
    }
    x.col(static_cast<Index>(j)) = x_.col(t);
    pi.col(static_cast<Index>(j)) = pi_.col(t);
  }
  return DataSet(std::move(x), std::move(pi));
}

Matrix DataSet::one_hot_binary(std::span<const int> labels,
                               Index positive_row) {
  if (positive_row != 0 && positive_row != 1) {
    throw InvalidInput("one_hot_binary: positive row must be 0 or 1");
  }
  Matrix pi = Matrix::Zero(2, static_cast<Index>(labels.size()));
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] != 0 && labels[t] != 1) {
      throw InvalidInput("one_hot_binary: label " + std::to_string(labels[t]) +
                         " at instance " + std::to_string(t) +
                         " is not 0 or 1");
    }
    const Index row = labels[t] == 1 ? positive_row : 1 - positive_row;
    pi(row, static_cast<Index>(t)) = 1.0;
  }
  return pi;
}

Affiliation::Affiliation(Index clusters, std::vector<Index> assignment)
    : clusters_(clusters), assignment_(std::move(assignment)) {
  if (clusters_ < 1) throw InvalidInput("affiliation: K must be >= 1");
  for (std::size_t t = 0; t < assignment_.size(); ++t) {
    if (assignment_[t] < 0 || assignment_[t] >= clusters_) {
      throw InvalidInput("affiliation: instance " + std::to_string(t) +
                         " assigned to box " +
                         std::to_string(assignment_[t]) + " of " +
                         std::to_string(clusters_));
    }
  }
}

Affiliation Affiliation::from_matrix(const Matrix& gamma) {
  std::vector<Index> assignment(static_cast<std::size_t>(gamma.cols()));
  for (Index t = 0; t < gamma.cols(); ++t) {
    Index hot = -1;
    for (Index k = 0; k < gamma.rows(); ++k) {
      const double v = gamma(k, t);
      if (v == 1.0 && hot < 0) {
        hot = k;
      } else if (v != 0.0) {
        hot = -2;
        break;
      }
    }
    if (hot < 0) {
      throw InvalidInput("affiliation: column " + std::to_string(t) +
                         " is not one-hot");
    }
    assignment[static_cast<std::size_t>(t)] = hot;
  }
  return Affiliation(gamma.rows(), std::move(assignment));
}

Affiliation Affiliation::random(Index clusters, Index instances,
                                std::uint64_t seed) {
  return from_matrix(random_discrete_gamma(clusters, instances, seed));
}

std::vector<Index> Affiliation::occupancy() const {
  std::vector<Index> counts(static_cast<std::size_t>(clusters_), 0);
  for (Index k : assignment_) ++counts[static_cast<std::size_t>(k)];
  return counts;
}

Matrix Affiliation::to_matrix() const {
  Matrix gamma = Matrix::Zero(clusters_, instances());
  for (Index t = 0; t < instances(); ++t) gamma((*this)[t], t) = 1.0;
  return gamma;
}

}  // namespace goal
