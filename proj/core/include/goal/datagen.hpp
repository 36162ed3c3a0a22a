#ifndef GOAL_DATAGEN_HPP
#define GOAL_DATAGEN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "goal/matrix.hpp"
#include "goal/model.hpp"

namespace goal {

/// Synthetic two-class set: a compact minority blob inside a majority
/// annulus in dims 1-2; the remaining dims are class-independent noise.
struct WormsSpec {
  Index instances = 300;
  Index dims = 10;
  double minority_fraction = 1.0 / 3.0;
  double signal_scale = 1.0;   // blob standard deviation
  double noise_scale = 3.0;    // standard deviation of dims 3..D
  double ring_radius = 6.0;    // annulus radius, in units of signal_scale
  double ring_width = 0.5;     // radial jitter, in units of signal_scale
  std::uint64_t seed = 0;

  void validate() const;
};

/// Pi row 0 is the minority class. Instance order is shuffled.
DataSet generate_worms(const WormsSpec& spec);

struct LagSpec {
  std::vector<int> lags{0, 1, 2, 3};
  int lead = 0;
  double threshold = 0.4;

  int max_lag() const;
  void validate() const;
  /// Number of aligned samples for a series of length `length`.
  Index samples(Index length) const;
};

/// Column j stacks series(:, t - lag) for each lag in order, with
/// t = j + max_lag. Output is (F * |lags|) x (N - max_lag - lead).
Matrix lag_embed(const Matrix& series, const LagSpec& spec);

/// Two-row one-hot Pi aligned with lag_embed: column j is class 1 (row 0)
/// when index[j + max_lag + lead] > threshold.
Matrix threshold_labels(std::span<const double> index, const LagSpec& spec);

}  // namespace goal

#endif  // GOAL_DATAGEN_HPP
