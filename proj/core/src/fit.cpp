#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "goal/error.hpp"
#include "goal/model.hpp"
#include "goal/numerics.hpp"

namespace goal {

void FitConfig::validate(std::optional<Index> dims) const {
  if (clusters < 1) throw ConfigError("K must be >= 1");
  if (gauge < 1) throw ConfigError("G must be >= 1");
  if (!(eps_cl >= 0.0) || !std::isfinite(eps_cl)) {
    throw ConfigError("eps_cl must be a finite value >= 0");
  }
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(lambda_floor > 0.0 && lambda_floor < 1.0)) {
    throw ConfigError("lambda_floor must lie in (0, 1)");
  }
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (n_restarts < 1) throw ConfigError("n_restarts must be >= 1");
  if (dims && gauge > *dims) {
    throw ConfigError("G=" + std::to_string(gauge) + " exceeds D=" +
                      std::to_string(*dims));
  }
}

RestartResult run_restart(const DataSet& data, const FitConfig& config,
                          std::uint64_t seed, bool stop_on_convergence) {
  config.validate(data.dims());

  RestartResult out;
  out.gamma = Affiliation::random(config.clusters, data.instances(),
                                  derive_seed(seed, 0));
  Matrix r = random_orthonormal(data.dims(), config.gauge, derive_seed(seed, 1));
  Matrix lambda = lambda_step(data, out.gamma);
  const std::uint64_t completion_seed = derive_seed(seed, 2);

  out.model.eps_cl = config.eps_cl;
  out.model.lambda_floor = config.lambda_floor;

  const auto start = std::chrono::steady_clock::now();
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < config.max_iter; ++it) {
    SStepResult boxes = s_step(data, out.gamma, r);
    const Matrix images = r * boxes.s;
    out.gamma = gamma_step(data, images, lambda, config.eps_cl,
                           config.lambda_floor);
    lambda = lambda_step(data, out.gamma);
    r = r_step(data, out.gamma, boxes.s, completion_seed);

    out.model.r = r;
    out.model.s = std::move(boxes.s);
    out.model.lambda = lambda;
    const double value = objective(data, out.model, out.gamma);
    if (!std::isfinite(value)) {
      throw NumericalError("objective became non-finite at iteration " +
                           std::to_string(it));
    }
    out.trace.push_back(value);
    if (!boxes.reseeded.empty()) out.reseed_iterations.push_back(it);

    if (stop_on_convergence && previous - value <= config.tol) {
      out.converged = true;
      break;
    }
    previous = value;
  }
  out.iteration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

FitResult fit(const DataSet& data, const FitConfig& config) {
  config.validate(data.dims());

  FitReport report;
  if (config.eps_e) {
    report.warnings.push_back(
        "eps_e is not part of the objective and was ignored");
  }
  if (data.instances() < config.clusters) {
    report.warnings.push_back("T=" + std::to_string(data.instances()) +
                              " < K=" + std::to_string(config.clusters) +
                              ": some boxes will stay empty");
  }

  std::optional<RestartResult> best;
  for (int restart = 0; restart < config.n_restarts; ++restart) {
    RestartResult run = run_restart(
        data, config, derive_seed(config.seed, static_cast<std::uint64_t>(restart)));
    const double final_value = run.trace.back();
    report.restart_objectives.push_back(final_value);
    if (!best || final_value < best->trace.back()) {
      best = std::move(run);
      report.restart_index_of_best = restart;
    }
  }

  report.objective_trace = best->trace;
  report.reseed_iterations = best->reseed_iterations;
  report.iterations = static_cast<int>(best->trace.size());
  report.converged = best->converged;
  report.iteration_seconds = best->iteration_seconds;
  return FitResult{std::move(best->model), std::move(best->gamma),
                   std::move(report)};
}

}  // namespace goal
