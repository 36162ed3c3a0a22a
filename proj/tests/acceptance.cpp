// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Run with --only NAME to run a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "goal/goal.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

namespace fs = std::filesystem;
using goal::Affiliation;
using goal::DataSet;
using goal::Index;
using goal::Matrix;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Verdict()> run;
};

const double kEpsValues[] = {0.0, 0.1, 1.0, 10.0};

Index uniform(std::mt19937_64& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Returns an empty string when the fitted state is feasible.
std::string infeasibility(const DataSet& data, const goal::GaugeModel& m,
                          const Affiliation& gamma) {
  const Index g = m.gauge();
  const double ortho = (m.r.transpose() * m.r - Matrix::Identity(g, g)).norm();
  if (!(ortho <= 1e-8)) return "RtR-I=" + fmt(ortho);
  for (Index k = 0; k < m.lambda.cols(); ++k) {
    if (std::abs(m.lambda.col(k).sum() - 1.0) > 1e-12) return "Lambda column sum";
    if ((m.lambda.col(k).array() < 0.0).any()) return "Lambda negative";
  }
  for (Index t = 0; t < data.instances(); ++t) {
    if (std::abs(data.pi().col(t).sum() - 1.0) > 1e-12) return "Pi column sum";
  }
  const Matrix onehot = gamma.to_matrix();
  for (Index t = 0; t < onehot.cols(); ++t) {
    int ones = 0;
    for (Index k = 0; k < onehot.rows(); ++k) {
      const double v = onehot(k, t);
      if (v != 0.0 && v != 1.0) return "Gamma entry not 0/1";
      ones += v == 1.0;
    }
    if (ones != 1) return "Gamma column not one-hot";
  }
  return "";
}

// Every fit in the suite goes through here so feasibility is tracked.
struct FeasibilityLog {
  int fits = 0;
  std::vector<std::string> failures;

  void record(const DataSet& data, const goal::GaugeModel& m,
              const Affiliation& gamma) {
    ++fits;
    const std::string why = infeasibility(data, m, gamma);
    if (!why.empty()) failures.push_back(why);
  }
};

FeasibilityLog feasibility;

DataSet random_instance(std::mt19937_64& rng, Index d, Index t) {
  Matrix x = oracle::gaussian(d, t, rng);
  for (Index j = 0; j < t / 2; ++j) x(0, j) += 3.0;
  return DataSet(x, oracle::random_binary_pi(t, rng));
}

// ------------------------------------------------------------ descent

Verdict monotone_descent() {
  std::mt19937_64 rng(20240601);
  int checked = 0, violations = 0, skipped = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const Index d = uniform(rng, 2, 20);
    const Index t = uniform(rng, 10, 200);
    goal::FitConfig c;
    c.clusters = uniform(rng, 1, 5);
    c.gauge = uniform(rng, 1, std::min<Index>(d, 5));
    c.eps_cl = kEpsValues[uniform(rng, 0, 3)];
    c.tol = 1e-12;
    c.max_iter = 300;
    c.n_restarts = 1;
    const DataSet data = random_instance(rng, d, t);
    const auto run = goal::run_restart(data, c, rng());
    feasibility.record(data, run.model, run.gamma);
    for (std::size_t it = 1; it < run.trace.size(); ++it) {
      if (std::find(run.reseed_iterations.begin(), run.reseed_iterations.end(),
                    static_cast<int>(it)) != run.reseed_iterations.end()) {
        ++skipped;
        continue;
      }
      const double rise = run.trace[it] - run.trace[it - 1];
      worst = std::max(worst, rise);
      violations += rise > 1e-10;
      ++checked;
    }
  }
  return {violations == 0 && checked > 0,
          "100 instances, " + std::to_string(checked) + " steps checked, " +
              std::to_string(skipped) + " reseed steps skipped, max rise " +
              fmt(worst)};
}

// ------------------------------------------------------------ R-step

Verdict r_step_optimality() {
  std::mt19937_64 rng(515);
  int beaten = 0, ties = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const Index d = uniform(rng, 2, 15);
    const Index g = uniform(rng, 1, std::min<Index>(d, 4));
    const Index k = uniform(rng, 2, 6);
    const Index t = uniform(rng, 20, 100);
    const DataSet data = random_instance(rng, d, t);
    const Affiliation gamma = Affiliation::random(k, t, rng());
    const Matrix s = oracle::gaussian(g, k, rng);
    const Matrix r = goal::r_step(data, gamma, s, rng());
    const Matrix dense = gamma.to_matrix();
    const double closed = oracle::procrustes(data.x(), r, s, dense);
    double best_random = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 1000; ++j) {
      best_random = std::min(
          best_random,
          oracle::procrustes(data.x(), oracle::random_stiefel(d, g, rng), s, dense));
    }
    const double margin = best_random - closed;
    min_margin = std::min(min_margin, margin);
    if (margin < 0.0) ++beaten;
    if (margin <= 1e-9 * std::max(1.0, closed)) {
      ++ties;
      std::cout << "  note: R-step instance " << i << " equals best random (D=" << d
                << " G=" << g << ", margin " << fmt(margin) << ")\n";
    }
  }
  return {beaten == 0, "20 instances x 1000 random bases, min margin " +
                           fmt(min_margin) + ", equality cases " +
                           std::to_string(ties)};
}

// -------------------------------------------------------- brute force

Verdict brute_force() {
  std::mt19937_64 rng(1212);
  int misses = 0;
  double worst = 0.0;
  const int instances = 100;
  for (int i = 0; i < instances; ++i) {
    const Index d = uniform(rng, 1, 3);
    const Index t = uniform(rng, 4, 12);
    goal::FitConfig c;
    c.clusters = 2;
    c.gauge = d;
    c.eps_cl = kEpsValues[uniform(rng, 0, 3)];
    c.tol = 1e-13;
    c.n_restarts = 20000;
    c.seed = rng();
    const DataSet data(oracle::gaussian(d, t, rng), oracle::random_binary_pi(t, rng));
    const auto fit = goal::fit(data, c);
    feasibility.record(data, fit.model, fit.gamma);
    const double fitted = goal::objective(data, fit.model, fit.gamma);
    const double exhaustive =
        oracle::brute_force_two_boxes(data.x(), data.pi(), c.eps_cl, c.lambda_floor);
    const double gap = fitted - exhaustive;
    worst = std::max(worst, std::abs(gap));
    if (std::abs(gap) > 1e-6) {
      ++misses;
      std::cout << "  note: brute-force instance " << i << " T=" << t << " D=" << d
                << " eps=" << c.eps_cl << " gap " << fmt(gap) << "\n";
    }
  }
  return {misses == 0, std::to_string(instances) +
                           " instances with T<=12, K=2, max |gap| " + fmt(worst)};
}

// -------------------------------------------------------------- worms

double worms_best_auc(Index dims, std::string& detail) {
  goal::WormsSpec spec;
  spec.instances = 300;
  spec.dims = dims;
  spec.seed = 7;
  const DataSet data = goal::generate_worms(spec);

  goal::GridSpec grid;
  for (Index k = 2; k <= 10; ++k) grid.clusters.push_back(k);
  grid.gauges = {2, 3};
  grid.eps_cl = {0.01, 0.1, 1.0, 10.0, 100.0};
  grid.base.n_restarts = 3;
  grid.base.seed = 11;

  goal::SplitPlan plan;
  plan.train_fraction = 0.75;
  plan.replicates = 20;
  plan.stratified = true;
  plan.seed = 5;

  const auto result = goal::grid_search(data, grid, plan);
  const auto& best = result.best_row();
  detail = "D=" + std::to_string(dims) + " mean AUC " + fmt(best.mean_auc) +
           " +- " + fmt(best.auc_ci95) + " (K=" + std::to_string(best.config.clusters) +
           " G=" + std::to_string(best.config.gauge) + " eps=" + fmt(best.config.eps_cl) +
           ", " + std::to_string(result.fits) + " fits)";
  return best.mean_auc;
}

Verdict worms_big() {
  std::string detail;
  const double a = worms_best_auc(10, detail);
  return {a >= 0.90, detail + ", need >= 0.90"};
}

Verdict worms_small() {
  std::string detail;
  const double a = worms_best_auc(1000, detail);
  return {a >= 0.60, detail + ", need >= 0.60"};
}

// ------------------------------------------------------------ scaling

Verdict scaling(goal::SweepAxis axis) {
  goal::ScalingSpec spec;
  spec.axis = axis;
  spec.from = 100;
  spec.to = 6400;
  spec.fixed_dims = 100;
  spec.fixed_instances = 200;
  spec.iterations = 20;
  spec.repeats = 5;
  const auto r = goal::measure_scaling(spec);
  std::string pts;
  for (const auto& p : r.points) {
    pts += " " + std::to_string(p.size) + ":" + fmt(p.seconds_per_iteration * 1e6) + "us";
  }
  return {r.slope >= 0.8 && r.slope <= 1.3,
          "slope " + fmt(r.slope) + " in [0.8, 1.3];" + pts};
}

// -------------------------------------------------------- feasibility

Verdict feasibility_suite() {
  // Extra fits across shapes, on top of those recorded by other criteria.
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const Index d = uniform(rng, 1, 30);
    const Index t = uniform(rng, 5, 150);
    goal::FitConfig c;
    c.clusters = uniform(rng, 1, std::min<Index>(t, 8));
    c.gauge = uniform(rng, 1, std::min<Index>(d, 6));
    c.eps_cl = kEpsValues[uniform(rng, 0, 3)];
    c.n_restarts = 2;
    c.seed = rng();
    const DataSet data = random_instance(rng, d, t);
    const auto fit = goal::fit(data, c);
    feasibility.record(data, fit.model, fit.gamma);
  }
  std::string detail = std::to_string(feasibility.fits) + " fits checked";
  if (!feasibility.failures.empty()) detail += ", first failure: " + feasibility.failures[0];
  return {feasibility.failures.empty(), detail};
}

// ------------------------------------------------------------ metrics

Verdict metric_oracles() {
  std::mt19937_64 rng(99);
  double worst_auc = 0.0, worst_acc = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 50));
    const bool coarse = i % 2 == 0;  // coarse scores force ties
    std::vector<double> s(n);
    std::vector<int> y(n), p(n);
    std::normal_distribution<double> z;
    for (std::size_t j = 0; j < n; ++j) {
      s[j] = coarse ? std::round(2.0 * z(rng)) : z(rng);
      y[j] = static_cast<int>(rng() % 2);
      p[j] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    worst_auc = std::max(worst_auc, std::abs(goal::auc(s, y) - oracle::auc_pairs(s, y)));
    worst_acc = std::max(worst_acc,
                         std::abs(goal::accuracy(p, y) - oracle::accuracy_count(p, y)));
  }
  return {worst_auc <= 1e-12 && worst_acc <= 1e-12,
          "1000 vectors, max AUC error " + fmt(worst_auc) + ", max accuracy error " +
              fmt(worst_acc)};
}

// -------------------------------------------------------- determinism

int shell(const std::string& command) {
  const int raw = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Verdict cli_determinism() {
  const std::string bin = GOAL_CLI_BINARY;
  const std::vector<std::string> outputs = {
      "features.csv",         "labels.csv",          "train_features.csv",
      "train_labels.csv",     "test_features.csv",   "test_labels.csv",
      "model.json",           "predictions.csv",     "metrics.json",
      "grid/grid_results.csv", "grid/best_model.json"};
  fs::path dirs[2] = {scratch::dir("determinism_a"), scratch::dir("determinism_b")};
  for (const fs::path& d : dirs) {
    const std::string p = d.string() + "/";
    const std::vector<std::string> steps = {
        "generate --T 300 --D 10 --seed 1 --test-fraction 0.25 --out-dir " + p,
        "fit --features " + p + "train_features.csv --labels " + p +
            "train_labels.csv --K 8 --G 2 --eps-cl 1 --seed 3 --model " + p + "model.json",
        "predict --model " + p + "model.json --features " + p +
            "test_features.csv --out " + p + "predictions.csv",
        "evaluate --model " + p + "model.json --features " + p +
            "test_features.csv --labels " + p + "test_labels.csv --out " + p + "metrics.json",
        "gridsearch --features " + p + "features.csv --labels " + p +
            "labels.csv --K 2,4,6 --G 2,3 --eps-cl 0.1,1,10 --replicates 3 "
            "--restarts 2 --seed 4 --out-dir " + p + "grid"};
    for (const auto& step : steps) {
      const int code = shell(bin + " " + step);
      if (code != 0) return {false, "command failed (" + std::to_string(code) + "): " + step};
    }
  }
  std::vector<std::string> differ;
  for (const auto& f : outputs) {
    const std::string a = scratch::read(dirs[0] / f);
    if (a.empty() || a != scratch::read(dirs[1] / f)) differ.push_back(f);
  }
  std::string detail = std::to_string(outputs.size()) + " files compared";
  for (const auto& f : differ) detail += ", differs: " + f;
  return {differ.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--only") only = argv[i + 1];
  }
  // Feasibility runs last so that it sees the fits of the other criteria.
  const std::vector<Criterion> criteria = {
      {"monotone-descent", 60, monotone_descent},
      {"r-step-optimality", 60, r_step_optimality},
      {"brute-force-exactness", 300, brute_force},
      {"worms-big-data", 450, worms_big},
      {"worms-small-data", 450, worms_small},
      {"scaling-dims", 300, [] { return scaling(goal::SweepAxis::kDims); }},
      {"scaling-instances", 300, [] { return scaling(goal::SweepAxis::kInstances); }},
      {"metric-oracles", 60, metric_oracles},
      {"cli-determinism", 300, cli_determinism},
      {"feasibility", 60, feasibility_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && c.name != only) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > c.budget_seconds) {
      v.pass = false;
      v.detail += ", over time budget of " + fmt(c.budget_seconds) + " s";
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << ": " << v.detail << " ["
              << fmt(secs) << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
