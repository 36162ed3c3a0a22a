#include "goal/numerics.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "goal/error.hpp"

namespace goal {

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        if (!std::isfinite(m(i, j))) {
          throw InvalidInput(std::string(what) + ": non-finite entry at (" +
                             std::to_string(i) + ", " + std::to_string(j) +
                             ")");
        }
      }
    }
  }
}

void require_shape(const Matrix& m, Index rows, Index cols,
                   std::string_view what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw InvalidInput(std::string(what) + ": expected " +
                       std::to_string(rows) + "x" + std::to_string(cols) +
                       ", got " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()));
  }
}

double orthonormality_defect(const Matrix& r) {
  const Matrix gram = r.transpose() * r;
  return (gram - Matrix::Identity(r.cols(), r.cols())).norm();
}

double column_sum_defect(const Matrix& m) {
  if (m.cols() == 0) return 0.0;
  return (m.colwise().sum().array() - 1.0).abs().maxCoeff();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over a combination of both inputs.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ThinSvd thin_svd(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw InvalidInput("thin_svd: empty matrix");
  }
  require_finite(a, "thin_svd");

  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return ThinSvd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

namespace {

// Removes the components of `column` along basis columns [0, count) twice
// (classical Gram-Schmidt with re-orthogonalization). Returns the norm left.
double orthogonalize(Eigen::Ref<Vector> column, const Matrix& basis,
                     Index count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < count; ++j) {
      column -= basis.col(j).dot(column) * basis.col(j);
    }
  }
  return column.norm();
}

}  // namespace

void complete_orthonormal(Matrix& basis, Index first, std::uint64_t seed) {
  if (basis.cols() > basis.rows()) {
    throw InvalidInput("complete_orthonormal: more columns than rows");
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector candidate(basis.rows());
  for (Index j = first; j < basis.cols(); ++j) {
    for (;;) {
      for (Index i = 0; i < candidate.size(); ++i) candidate(i) = normal(rng);
      const double scale = candidate.norm();
      const double left = orthogonalize(candidate, basis, j);
      // A draw almost inside the current span is redrawn.
      if (left > 1e-8 * scale) {
        basis.col(j) = candidate / left;
        break;
      }
    }
  }
}

Matrix random_orthonormal(Index rows, Index cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) {
    throw InvalidInput("random_orthonormal: dimensions must be positive");
  }
  if (cols > rows) {
    throw InvalidInput("random_orthonormal: G=" + std::to_string(cols) +
                       " exceeds D=" + std::to_string(rows));
  }
  Matrix basis(rows, cols);
  complete_orthonormal(basis, 0, seed);
  return basis;
}

Matrix random_discrete_gamma(Index clusters, Index instances,
                             std::uint64_t seed) {
  if (clusters < 1 || instances < 1) {
    throw InvalidInput("random_discrete_gamma: dimensions must be positive");
  }
  Rng rng(seed);
  std::uniform_int_distribution<Index> pick(0, clusters - 1);
  Matrix gamma = Matrix::Zero(clusters, instances);
  for (Index t = 0; t < instances; ++t) gamma(pick(rng), t) = 1.0;
  return gamma;
}

}  // namespace goal
