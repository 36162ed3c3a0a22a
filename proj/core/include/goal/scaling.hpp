#ifndef GOAL_SCALING_HPP
#define GOAL_SCALING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "goal/matrix.hpp"

namespace goal {

enum class SweepAxis { kDims, kInstances };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct ScalingSpec {
  SweepAxis axis = SweepAxis::kDims;
  Index from = 100;
  Index to = 6400;
  double factor = 2.0;
  Index fixed_dims = 100;        // D when sweeping T
  Index fixed_instances = 200;   // T when sweeping D
  Index clusters = 4;
  Index gauge = 2;
  double eps_cl = 1.0;
  int iterations = 20;
  int repeats = 3;
  std::uint64_t seed = 1;

  std::vector<Index> sizes() const;
  void validate() const;
};

struct ScalingPoint {
  Index size = 0;
  double seconds_per_iteration = 0.0;  // median over repeats
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  double slope = 0.0;  // least-squares slope of log(time) on log(size)
};

/// Times fixed-length runs (no convergence stop) on random data for every
/// size in the sweep.
ScalingResult measure_scaling(const ScalingSpec& spec);

/// Ordinary least squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace goal

#endif  // GOAL_SCALING_HPP
