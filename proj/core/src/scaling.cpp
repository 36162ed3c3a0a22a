#include "goal/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "goal/error.hpp"
#include "goal/model.hpp"
#include "goal/numerics.hpp"

namespace goal {

std::string to_string(SweepAxis axis) {
  return axis == SweepAxis::kDims ? "D" : "T";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "D" || name == "d" || name == "dims") return SweepAxis::kDims;
  if (name == "T" || name == "t" || name == "instances") {
    return SweepAxis::kInstances;
  }
  throw ConfigError("--sweep must be D or T, got '" + name + "'");
}

std::vector<Index> ScalingSpec::sizes() const {
  std::vector<Index> out;
  for (double size = static_cast<double>(from);
       std::llround(size) <= to; size *= factor) {
    out.push_back(static_cast<Index>(std::llround(size)));
  }
  return out;
}

void ScalingSpec::validate() const {
  if (from < 1 || to < from) throw ConfigError("bench: need 1 <= from <= to");
  if (!(factor > 1.0)) throw ConfigError("bench: factor must be > 1");
  if (iterations < 1 || repeats < 1) {
    throw ConfigError("bench: iterations and repeats must be >= 1");
  }
  if (clusters < 1 || gauge < 1) throw ConfigError("bench: K, G must be >= 1");
  const Index smallest_dims = axis == SweepAxis::kDims ? from : fixed_dims;
  if (gauge > smallest_dims) {
    throw ConfigError("bench: G exceeds the smallest D in the sweep");
  }
  if (fixed_dims < 1 || fixed_instances < 1) {
    throw ConfigError("bench: fixed sizes must be >= 1");
  }
  if (sizes().size() < 2) throw ConfigError("bench: sweep needs two sizes");
}

namespace {

DataSet random_problem(Index dims, Index instances, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  Matrix x(dims, instances);
  for (Index t = 0; t < instances; ++t) {
    for (Index d = 0; d < dims; ++d) x(d, t) = normal(rng);
  }
  std::vector<int> labels(static_cast<std::size_t>(instances));
  for (auto& label : labels) label = coin(rng) ? 1 : 0;
  return DataSet(std::move(x), DataSet::one_hot_binary(labels));
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidInput("loglog_slope: need two or more paired points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidInput("loglog_slope: values must be positive");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ScalingResult measure_scaling(const ScalingSpec& spec) {
  spec.validate();
  FitConfig config;
  config.clusters = spec.clusters;
  config.gauge = spec.gauge;
  config.eps_cl = spec.eps_cl;
  config.max_iter = spec.iterations;
  config.n_restarts = 1;

  ScalingResult result;
  std::vector<double> xs, ys;
  bool warmed = false;
  for (Index size : spec.sizes()) {
    const Index dims = spec.axis == SweepAxis::kDims ? size : spec.fixed_dims;
    const Index instances =
        spec.axis == SweepAxis::kDims ? spec.fixed_instances : size;
    const DataSet data = random_problem(
        dims, instances, derive_seed(spec.seed, static_cast<std::uint64_t>(size)));
    if (!warmed) {
      run_restart(data, config, spec.seed, false);
      warmed = true;
    }
    std::vector<double> samples;
    for (int rep = 0; rep < spec.repeats; ++rep) {
      const RestartResult run = run_restart(
          data, config, derive_seed(spec.seed, static_cast<std::uint64_t>(rep)),
          false);
      samples.push_back(run.iteration_seconds /
                        static_cast<double>(run.trace.size()));
    }
    const double per_iteration = median(samples);
    result.points.push_back({size, per_iteration});
    xs.push_back(static_cast<double>(size));
    ys.push_back(per_iteration);
  }
  result.slope = loglog_slope(xs, ys);
  return result;
}

}  // namespace goal
