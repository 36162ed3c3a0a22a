#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "goal/error.hpp"
#include "goal/evaluation.hpp"
#include "goal/numerics.hpp"

namespace goal {

std::string to_string(SplitKind kind) {
  switch (kind) {
    case SplitKind::kRandomHoldout:
      return "holdout";
    case SplitKind::kKFold:
      return "kfold";
    case SplitKind::kTemporal:
      return "temporal";
  }
  return "holdout";
}

SplitKind split_kind_from_string(const std::string& name) {
  if (name == "holdout" || name == "random_holdout") {
    return SplitKind::kRandomHoldout;
  }
  if (name == "kfold") return SplitKind::kKFold;
  if (name == "temporal") return SplitKind::kTemporal;
  throw ConfigError("unknown split kind '" + name +
                    "' (expected holdout, kfold or temporal)");
}

void SplitPlan::validate(Index instances) const {
  if (instances < 2) throw ConfigError("splits need at least 2 instances");
  if (kind != SplitKind::kKFold &&
      !(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation_fraction must lie in [0, 1)");
  }
  if (kind == SplitKind::kKFold && (folds < 2 || folds > instances)) {
    throw ConfigError("folds=" + std::to_string(folds) +
                      " must lie in [2, T=" + std::to_string(instances) + "]");
  }
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
}

namespace {

Index rounded(double fraction, Index n) {
  return static_cast<Index>(std::llround(fraction * static_cast<double>(n)));
}

// Moves the last `fraction` of the training part to validation, after a
// seeded shuffle when `shuffle` (temporal plans keep time order).
void carve_validation(Split& split, double fraction, Index seed_stream,
                      std::uint64_t seed, bool shuffle) {
  if (fraction <= 0.0) return;
  if (shuffle) {
    Rng rng(derive_seed(seed, 1000 + static_cast<std::uint64_t>(seed_stream)));
    std::shuffle(split.train.begin(), split.train.end(), rng);
  }
  const Index n_val = rounded(fraction, static_cast<Index>(split.train.size()));
  if (n_val < 1 || n_val >= static_cast<Index>(split.train.size())) {
    throw ConfigError("validation_fraction leaves an empty training or "
                      "validation part");
  }
  split.validation.assign(split.train.end() - n_val, split.train.end());
  split.train.resize(split.train.size() - static_cast<std::size_t>(n_val));
}

void finish(Split& split) {
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  if (split.train.empty() || split.test.empty()) {
    throw ConfigError("split plan leaves an empty training or test part");
  }
}

std::map<int, std::vector<Index>> by_class(std::span<const int> labels) {
  std::map<int, std::vector<Index>> groups;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    groups[labels[t]].push_back(static_cast<Index>(t));
  }
  return groups;
}

}  // namespace

std::vector<Split> make_splits(Index instances, const SplitPlan& plan,
                               std::span<const int> labels) {
  plan.validate(instances);
  if (plan.stratified && static_cast<Index>(labels.size()) != instances) {
    throw InvalidInput("stratified splits need one label per instance");
  }
  std::vector<Split> splits;

  if (plan.kind == SplitKind::kTemporal) {
    Split split;
    const Index n_train = rounded(plan.train_fraction, instances);
    for (Index t = 0; t < instances; ++t) {
      (t < n_train ? split.train : split.test).push_back(t);
    }
    carve_validation(split, plan.validation_fraction, 0, plan.seed, false);
    finish(split);
    splits.push_back(std::move(split));
    return splits;
  }

  if (plan.kind == SplitKind::kRandomHoldout) {
    for (int rep = 0; rep < plan.replicates; ++rep) {
      Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(rep)));
      Split split;
      auto take = [&](std::vector<Index> pool) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const Index n_train = rounded(plan.train_fraction,
                                      static_cast<Index>(pool.size()));
        split.train.insert(split.train.end(), pool.begin(),
                           pool.begin() + n_train);
        split.test.insert(split.test.end(), pool.begin() + n_train, pool.end());
      };
      if (plan.stratified) {
        for (auto& [label, members] : by_class(labels)) take(members);
      } else {
        std::vector<Index> all(static_cast<std::size_t>(instances));
        std::iota(all.begin(), all.end(), Index{0});
        take(std::move(all));
      }
      carve_validation(split, plan.validation_fraction, rep, plan.seed, true);
      finish(split);
      splits.push_back(std::move(split));
    }
    return splits;
  }

  // k-fold: assign every instance a fold, then each fold is one test set.
  Rng rng(plan.seed);
  std::vector<int> fold_of(static_cast<std::size_t>(instances));
  if (plan.stratified) {
    std::size_t dealt = 0;
    for (auto& [label, members] : by_class(labels)) {
      std::shuffle(members.begin(), members.end(), rng);
      for (Index t : members) {
        fold_of[static_cast<std::size_t>(t)] =
            static_cast<int>(dealt++ % static_cast<std::size_t>(plan.folds));
      }
    }
  } else {
    std::vector<Index> order(static_cast<std::size_t>(instances));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      fold_of[static_cast<std::size_t>(order[pos])] = static_cast<int>(
          pos * static_cast<std::size_t>(plan.folds) / order.size());
    }
  }
  for (int fold = 0; fold < plan.folds; ++fold) {
    Split split;
    for (Index t = 0; t < instances; ++t) {
      (fold_of[static_cast<std::size_t>(t)] == fold ? split.test : split.train)
          .push_back(t);
    }
    carve_validation(split, plan.validation_fraction, fold, plan.seed, true);
    finish(split);
    splits.push_back(std::move(split));
  }
  return splits;
}

}  // namespace goal
