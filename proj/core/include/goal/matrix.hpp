#ifndef GOAL_MATRIX_HPP
#define GOAL_MATRIX_HPP

#include <string_view>

#include <Eigen/Core>

namespace goal {

// Dense storage for every matrix in the library. Eigen's default layout is
// column-major, which keeps one instance (one column of X) contiguous.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws InvalidInput naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

/// Throws InvalidInput unless `m` is rows x cols.
void require_shape(const Matrix& m, Index rows, Index cols,
                   std::string_view what);

/// Frobenius norm of RᵀR - I.
double orthonormality_defect(const Matrix& r);

/// Largest |column sum - 1| over all columns.
double column_sum_defect(const Matrix& m);

}  // namespace goal

#endif  // GOAL_MATRIX_HPP
