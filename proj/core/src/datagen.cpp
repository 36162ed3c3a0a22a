#include "goal/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "goal/error.hpp"
#include "goal/numerics.hpp"

namespace goal {

void WormsSpec::validate() const {
  if (dims < 2) throw ConfigError("worms: D must be >= 2");
  if (instances < 10) throw ConfigError("worms: T must be >= 10");
  if (!(minority_fraction > 0.0 && minority_fraction < 1.0)) {
    throw ConfigError("worms: minority_fraction must lie in (0, 1)");
  }
  if (!(signal_scale > 0.0)) throw ConfigError("worms: signal_scale must be > 0");
  if (!(noise_scale > signal_scale)) {
    throw ConfigError("worms: noise_scale must exceed signal_scale");
  }
  if (!(ring_radius > 3.0)) {
    throw ConfigError("worms: ring_radius must exceed 3 signal_scale units");
  }
  if (!(ring_width >= 0.0)) throw ConfigError("worms: ring_width must be >= 0");
  const auto minority = std::llround(minority_fraction * static_cast<double>(instances));
  if (minority < 1 || minority >= instances) {
    throw ConfigError("worms: minority_fraction leaves a class empty");
  }
}

DataSet generate_worms(const WormsSpec& spec) {
  spec.validate();
  const Index t_total = spec.instances;
  const auto minority = static_cast<Index>(
      std::llround(spec.minority_fraction * static_cast<double>(t_total)));

  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  Matrix x(spec.dims, t_total);
  std::vector<int> label(static_cast<std::size_t>(t_total));
  for (Index t = 0; t < t_total; ++t) {
    const bool positive = t < minority;
    label[static_cast<std::size_t>(t)] = positive ? 1 : 0;
    if (positive) {
      x(0, t) = spec.signal_scale * normal(rng);
      x(1, t) = spec.signal_scale * normal(rng);
    } else {
      const double radius =
          spec.signal_scale * (spec.ring_radius + spec.ring_width * normal(rng));
      const double phi = angle(rng);
      x(0, t) = radius * std::cos(phi);
      x(1, t) = radius * std::sin(phi);
    }
    for (Index d = 2; d < spec.dims; ++d) x(d, t) = spec.noise_scale * normal(rng);
  }

  std::vector<Index> order(static_cast<std::size_t>(t_total));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  Matrix shuffled(spec.dims, t_total);
  std::vector<int> shuffled_label(label.size());
  for (Index j = 0; j < t_total; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    shuffled.col(j) = x.col(src);
    shuffled_label[static_cast<std::size_t>(j)] = label[static_cast<std::size_t>(src)];
  }
  return DataSet(std::move(shuffled), DataSet::one_hot_binary(shuffled_label));
}

int LagSpec::max_lag() const {
  return lags.empty() ? 0 : *std::max_element(lags.begin(), lags.end());
}

void LagSpec::validate() const {
  if (lags.empty()) throw ConfigError("lag spec: need at least one lag");
  for (int lag : lags) {
    if (lag < 0) throw ConfigError("lag spec: lags must be >= 0");
  }
  if (lead < 0) throw ConfigError("lag spec: lead must be >= 0");
  if (!std::isfinite(threshold)) throw ConfigError("lag spec: bad threshold");
}

Index LagSpec::samples(Index length) const {
  return length - max_lag() - lead;
}

Matrix lag_embed(const Matrix& series, const LagSpec& spec) {
  spec.validate();
  require_finite(series, "lag_embed series");
  const Index n_out = spec.samples(series.cols());
  if (n_out < 1) {
    throw InvalidInput("lag_embed: series of length " +
                       std::to_string(series.cols()) + " is too short for max lag " +
                       std::to_string(spec.max_lag()) + " and lead " +
                       std::to_string(spec.lead));
  }
  const Index features = series.rows();
  Matrix out(features * static_cast<Index>(spec.lags.size()), n_out);
  for (Index j = 0; j < n_out; ++j) {
    const Index t = j + spec.max_lag();
    for (std::size_t l = 0; l < spec.lags.size(); ++l) {
      out.block(static_cast<Index>(l) * features, j, features, 1) =
          series.col(t - spec.lags[l]);
    }
  }
  return out;
}

Matrix threshold_labels(std::span<const double> index, const LagSpec& spec) {
  spec.validate();
  const Index n_out = spec.samples(static_cast<Index>(index.size()));
  if (n_out < 1) {
    throw InvalidInput("threshold_labels: index of length " +
                       std::to_string(index.size()) + " is too short");
  }
  std::vector<int> labels(static_cast<std::size_t>(n_out));
  for (Index j = 0; j < n_out; ++j) {
    const double value =
        index[static_cast<std::size_t>(j + spec.max_lag() + spec.lead)];
    if (!std::isfinite(value)) {
      throw InvalidInput("threshold_labels: non-finite index value");
    }
    labels[static_cast<std::size_t>(j)] = value > spec.threshold ? 1 : 0;
  }
  return DataSet::one_hot_binary(labels);
}

}  // namespace goal
