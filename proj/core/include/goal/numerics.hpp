#ifndef GOAL_NUMERICS_HPP
#define GOAL_NUMERICS_HPP

#include <cstdint>
#include <random>

#include "goal/matrix.hpp"

namespace goal {

/// Thin factorization A = U diag(sigma) Vᵀ with r = min(rows, cols).
/// Factor signs are unspecified.
struct ThinSvd {
  Matrix u;      // rows x r, orthonormal columns
  Vector sigma;  // r, nonincreasing, nonnegative
  Matrix v;      // cols x r, orthonormal columns
};

ThinSvd thin_svd(const Matrix& a);

/// Seeded D x G matrix with orthonormal columns (Gram-Schmidt with one
/// re-orthogonalization pass over a standard Gaussian draw).
Matrix random_orthonormal(Index rows, Index cols, std::uint64_t seed);

/// Overwrites columns [first, cols) of `basis` with unit vectors orthogonal
/// to every other column. Columns before `first` must already be
/// orthonormal. Directions are drawn from a Gaussian seeded by `seed`.
void complete_orthonormal(Matrix& basis, Index first, std::uint64_t seed);

/// Seeded K x T one-hot matrix; each column's nonzero row is uniform on
/// [0, K).
Matrix random_discrete_gamma(Index clusters, Index instances,
                             std::uint64_t seed);

/// Engine used by every seeded routine in the library.
using Rng = std::mt19937_64;

/// Mixes a base seed with a stream index so that nearby seeds give
/// unrelated streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace goal

#endif  // GOAL_NUMERICS_HPP
