#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <filesystem>
#include <limits>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/run_config.hpp"
#include "goal/goal.hpp"

namespace goal::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kDescription = R"(goal - gauge-optimal approximate learning classifier

Minimizes over a rotation R (D x G, RᵀR = I_G), box coordinates S (G x K),
one-hot affiliations Gamma (K x T) and a column-stochastic label table
Lambda (M x K):

  L = 1/T  sum_{d,t} (X_{d,t} - {R S Gamma}_{d,t})^2
      - eps_cl/(T M) sum_{m,t} Pi_{m,t} log( sum_k Lambda_{m,k} Gamma_{k,t} )

Flags map onto the symbols: --K boxes, --G gauge dimension, --eps-cl the
label weight eps_cl, --features X (D x T), --labels Pi (M x T).
Worker threads: GOAL_NUM_THREADS (default: all cores).
Exit codes: 0 ok, 2 configuration, 3 data validation, 4 numerical failure.)";

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

json number_or_null(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

std::string cell(double value) {
  return std::isfinite(value) ? format_number(value) : std::string("nan");
}

void write_json(const fs::path& path, const json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

void require_path(const fs::path& path, const char* flag) {
  if (path.empty()) throw ConfigError(std::string("missing required ") + flag);
}

json config_json(const FitConfig& c) {
  json doc = {{"K", c.clusters},        {"G", c.gauge},
              {"eps_cl", c.eps_cl},     {"tol", c.tol},
              {"lambda_floor", c.lambda_floor}, {"max_iter", c.max_iter},
              {"restarts", c.n_restarts}, {"seed", c.seed}};
  if (c.eps_e) doc["eps_e"] = *c.eps_e;
  return doc;
}

void require_single_candidate(const RunConfig& c) {
  if (c.grid.clusters.size() != 1 || c.grid.gauges.size() != 1 ||
      c.grid.eps_cl.size() != 1) {
    throw ConfigError("fit takes single values for K, G and eps_cl; use "
                      "gridsearch for lists");
  }
}

// ------------------------------------------------------------- commands

int cmd_generate(const RunConfig& c, std::ostream& out) {
  const DataSet data = generate_worms(c.worms);
  save_dataset(data, c.out_dir / "features.csv", c.out_dir / "labels.csv");
  if (c.test_fraction > 0.0) {
    SplitPlan plan;
    plan.train_fraction = 1.0 - c.test_fraction;
    plan.stratified = true;
    plan.seed = c.split.seed;
    const auto split = make_splits(data.instances(), plan,
                                   truth_labels(data.pi()))
                           .front();
    save_dataset(data.subset(split.train), c.out_dir / "train_features.csv",
                 c.out_dir / "train_labels.csv");
    save_dataset(data.subset(split.test), c.out_dir / "test_features.csv",
                 c.out_dir / "test_labels.csv");
  }
  out << "generated T=" << data.instances() << " D=" << data.dims()
      << " into " << c.out_dir.string() << "\n";
  return 0;
}

int cmd_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_path(c.features, "--features");
  require_path(c.labels, "--labels");
  require_single_candidate(c);
  c.fit.validate();
  const DataSet data = load_dataset(c.features, c.labels, c.rows);

  const auto start = std::chrono::steady_clock::now();
  const FitResult result = fit(data, c.fit);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  for (const auto& warning : result.report.warnings) {
    err << "warning: " << warning << "\n";
  }

  const double final_objective = result.report.objective_trace.back();
  save_model(c.model, ModelFile{result.model,
                                {c.fit.seed, result.report.iterations,
                                 final_objective, result.report.converged}});

  const FitReport& r = result.report;
  json report = {
      {"config", config_json(c.fit)},
      {"D", data.dims()},
      {"T", data.instances()},
      {"M", data.classes()},
      {"parameter_count", parameter_count(c.fit, data.dims(), data.classes())},
      {"objective_trace", r.objective_trace},
      {"final_objective", final_objective},
      {"iterations", r.iterations},
      {"converged", r.converged},
      {"restart_index_of_best", r.restart_index_of_best},
      {"restart_objectives", r.restart_objectives},
      {"reseed_iterations", r.reseed_iterations},
      {"warnings", r.warnings},
      {"wall_seconds", wall},
  };
  const fs::path report_path =
      c.report.empty() ? c.model.parent_path() / "fit_report.json" : c.report;
  write_json(report_path, report);
  out << "objective=" << format_number(final_objective)
      << " iterations=" << r.iterations << " model=" << c.model.string()
      << "\n";
  return 0;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
  require_path(c.features, "--features");
  const ModelFile file = load_model(c.model);
  const Matrix x = load_features(c.features, c.rows);
  const Matrix proba = predict_proba(file.model, x);
  const auto labels =
      labels_from_proba(proba, c.threshold, c.positive_row);

  Matrix table(proba.cols(), proba.rows() + 1);
  table.leftCols(proba.rows()) = proba.transpose();
  for (Index t = 0; t < proba.cols(); ++t) {
    table(t, proba.rows()) = labels[static_cast<std::size_t>(t)];
  }
  std::vector<std::string> header;
  for (Index m = 0; m < proba.rows(); ++m) header.push_back("p" + std::to_string(m));
  header.emplace_back("label");
  const fs::path path = c.out.empty() ? fs::path("predictions.csv") : c.out;
  write_table(path, table, header);
  out << "predicted " << proba.cols() << " instances into " << path.string()
      << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& c, std::ostream& out) {
  require_path(c.features, "--features");
  require_path(c.labels, "--labels");
  const ModelFile file = load_model(c.model);
  const DataSet data = load_dataset(c.features, c.labels, c.rows);
  const Metrics metrics =
      evaluate(file.model, data, c.threshold, c.positive_row);

  json confusion = json::array();
  for (Index i = 0; i < metrics.confusion.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < metrics.confusion.cols(); ++j) {
      row.push_back(metrics.confusion(i, j));
    }
    confusion.push_back(row);
  }
  const json doc = {{"auc", number_or_null(metrics.auc)},
                    {"accuracy", metrics.accuracy},
                    {"confusion", confusion},
                    {"n_test", metrics.n_test},
                    {"threshold", c.threshold},
                    {"positive_row", c.positive_row}};
  const fs::path path = c.out.empty() ? fs::path("metrics.json") : c.out;
  write_json(path, doc);
  out << "auc=" << cell(metrics.auc)
      << " accuracy=" << format_number(metrics.accuracy) << "\n";
  return 0;
}

int cmd_gridsearch(const RunConfig& c, std::ostream& out) {
  require_path(c.features, "--features");
  require_path(c.labels, "--labels");
  for (const FitConfig& candidate : c.grid.candidates()) candidate.validate();
  const DataSet data = load_dataset(c.features, c.labels, c.rows);
  const GridResult result = grid_search(data, c.grid, c.split, c.positive_row);

  std::string table =
      "K,G,eps_cl,parameters,mean_auc,auc_ci95,mean_accuracy,"
      "mean_validation_auc,status\n";
  std::string timings = "K,G,eps_cl,mean_fit_seconds\n";
  json rows = json::array();
  for (const GridRow& row : result.rows) {
    const std::string key = std::to_string(row.config.clusters) + "," +
                            std::to_string(row.config.gauge) + "," +
                            format_number(row.config.eps_cl);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    table += key + "," + std::to_string(row.parameters) + "," +
             cell(row.failed ? nan : row.mean_auc) + "," +
             cell(row.failed ? nan : row.auc_ci95) + "," +
             cell(row.failed ? nan : row.mean_accuracy) + "," +
             cell(row.failed ? nan : row.mean_validation_auc) + "," +
             (row.failed ? "failed" : "ok") + "\n";
    timings += key + "," + cell(row.failed ? nan : row.mean_fit_seconds) + "\n";

    json splits = json::array();
    for (const SplitOutcome& s : row.splits) {
      splits.push_back({{"test_auc", number_or_null(s.test_auc)},
                        {"test_accuracy", s.test_accuracy},
                        {"validation_auc", number_or_null(s.validation_auc)},
                        {"objective", s.objective}});
    }
    json entry = {{"K", row.config.clusters},
                  {"G", row.config.gauge},
                  {"eps_cl", row.config.eps_cl},
                  {"parameters", row.parameters},
                  {"failed", row.failed},
                  {"splits", splits}};
    if (row.failed) entry["error"] = row.error;
    rows.push_back(entry);
  }

  const GridRow& best = result.best_row();
  const json report = {
      {"selection", result.selected_on_validation
                        ? "validation AUC"
                        : "test AUC (optimistic: no separate validation part)"},
      {"split", {{"kind", to_string(c.split.kind)},
                 {"train_fraction", c.split.train_fraction},
                 {"validation_fraction", c.split.validation_fraction},
                 {"folds", c.split.folds},
                 {"replicates", c.split.replicates},
                 {"stratified", c.split.stratified},
                 {"seed", c.split.seed}}},
      {"fits", result.fits},
      {"best", {{"K", best.config.clusters},
                {"G", best.config.gauge},
                {"eps_cl", best.config.eps_cl},
                {"parameters", best.parameters},
                {"mean_auc", best.mean_auc},
                {"auc_ci95", best.auc_ci95},
                {"mean_accuracy", best.mean_accuracy}}},
      {"candidates", rows}};

  write_file_atomic(c.out_dir / "grid_results.csv", table);
  write_file_atomic(c.out_dir / "grid_timings.csv", timings);
  write_json(c.out_dir / "grid_report.json", report);

  const FitResult refit = fit(data, best.config);
  save_model(c.out_dir / "best_model.json",
             ModelFile{refit.model,
                       {best.config.seed, refit.report.iterations,
                        refit.report.objective_trace.back(),
                        refit.report.converged}});
  out << "best K=" << best.config.clusters << " G=" << best.config.gauge
      << " eps_cl=" << format_number(best.config.eps_cl)
      << " mean_auc=" << format_number(best.mean_auc) << "\n";
  return 0;
}

int cmd_bench(const RunConfig& c, std::ostream& out) {
  const ScalingResult result = measure_scaling(c.bench);
  Matrix table(static_cast<Index>(result.points.size()), 2);
  json points = json::array();
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    table(static_cast<Index>(i), 0) = static_cast<double>(result.points[i].size);
    table(static_cast<Index>(i), 1) = result.points[i].seconds_per_iteration;
    points.push_back({{"size", result.points[i].size},
                      {"seconds_per_iteration",
                       result.points[i].seconds_per_iteration}});
  }
  const fs::path path = c.out.empty() ? fs::path("bench.csv") : c.out;
  write_table(path, table, {"size", "seconds_per_iteration"});
  fs::path summary = path;
  summary.replace_extension(".json");
  const ScalingSpec& b = c.bench;
  write_json(summary, {{"sweep", to_string(b.axis)},
                       {"fixed", b.axis == SweepAxis::kDims ? b.fixed_instances
                                                            : b.fixed_dims},
                       {"K", b.clusters},
                       {"G", b.gauge},
                       {"iterations", b.iterations},
                       {"repeats", b.repeats},
                       {"points", points},
                       {"loglog_slope", result.slope}});
  out << "sweep=" << to_string(b.axis) << " slope=" << format_number(result.slope)
      << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app(kDescription, "goal");
  app.require_subcommand(0, 1);

  struct Binding {
    CLI::App* command;
    std::string key;
    std::string value;
    CLI::Option* option = nullptr;
  };
  std::deque<Binding> bindings;
  using Keys = std::vector<std::pair<const char*, const char*>>;
  std::map<CLI::App*, std::string> config_files;

  const Keys fit_keys = {
      {"K", "number of boxes K"},
      {"G", "gauge dimension G (<= D)"},
      {"eps_cl", "label weight eps_cl >= 0"},
      {"eps_e", "accepted and ignored"},
      {"tol", "stop when the objective decrease is <= tol"},
      {"lambda_floor", "probability floor inside logarithms"},
      {"max_iter", "iteration cap per restart"},
      {"restarts", "independent random starts"},
      {"seed", "random seed"}};
  auto with = [](Keys a, const Keys& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const Keys data_keys = {
      {"features", "features file"},
      {"labels", "labels file: one 0/1 column or M probability columns"},
      {"rows", "instances|features: what one file row holds"}};
  const Keys split_keys = {
      {"split", "holdout|kfold|temporal"},
      {"train_fraction", "training share for holdout/temporal"},
      {"validation_fraction", "share of the training part held for selection"},
      {"folds", "folds for kfold"},
      {"replicates", "random holdout repetitions"},
      {"stratified", "true|false"},
      {"split_seed", "seed for the splits (default: --seed)"}};

  auto add_many = [&](const std::string& name, const std::string& help,
                      const Keys& keys) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_files[sub],
                    "JSON file of settings; flags override it");
    for (const auto& [key, text] : keys) {
      Binding& b = bindings.emplace_back(Binding{sub, key, ""});
      b.option = sub->add_option(dashed(key), b.value, text);
    }
    return sub;
  };

  add_many("generate", "write a synthetic blob-in-annulus dataset",
           {{"T", "instances"},
            {"D", "dimensions (>= 2)"},
            {"seed", "random seed"},
            {"minority_fraction", "share of the inner class"},
            {"noise_scale", "std of the irrelevant dims"},
            {"signal_scale", "std of the inner blob"},
            {"ring_radius", "annulus radius in signal_scale units"},
            {"ring_width", "annulus radial jitter in signal_scale units"},
            {"test_fraction", "also write a stratified train/test split"},
            {"split_seed", "seed for the split"},
            {"out_dir", "output directory"}});
  add_many("fit", "train a model and write it with a fit report",
           with(with(data_keys, fit_keys),
                Keys{{"model", "output model file"},
                     {"report", "output report file"}}));
  add_many("predict", "write class probabilities and labels",
           {{"model", "model file"},
            {"features", "features file"},
            {"rows", "instances|features"},
            {"threshold", "positive when p(positive) > threshold"},
            {"positive_row", "Pi row of the positive class"},
            {"out", "output CSV"}});
  add_many("evaluate", "score a model against a labels file",
           with(data_keys, Keys{{"model", "model file"},
                            {"threshold", "positive when p(positive) > threshold"},
                            {"positive_row", "Pi row of the positive class"},
                            {"out", "output metrics JSON"}}));
  {
    auto keys = with(data_keys, fit_keys);
    keys.insert(keys.end(), split_keys.begin(), split_keys.end());
    keys.push_back({"positive_row", "Pi row of the positive class"});
    keys.push_back({"out_dir", "output directory"});
    CLI::App* sub = add_many("gridsearch",
                             "cross-validated search over K, G, eps_cl lists",
                             keys);
    sub->footer("K, G and eps_cl accept comma-separated lists.");
  }
  add_many("bench", "time fixed-length fits over a geometric size sweep",
           {{"sweep", "D or T"},
            {"from", "smallest size"},
            {"to", "largest size"},
            {"factor", "geometric step"},
            {"fixed", "the size that stays fixed (T for a D sweep, D for T)"},
            {"K", "boxes"},
            {"G", "gauge dimension"},
            {"eps_cl", "label weight"},
            {"iterations", "iterations per timed run"},
            {"repeats", "timed runs per size (median)"},
            {"seed", "random seed"},
            {"out", "output CSV"}});

  std::vector<std::string> argv_storage = args;
  std::vector<char*> argv;
  argv.reserve(argv_storage.size());
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      throw ConfigError(e.what());
    }

    const auto chosen = app.get_subcommands();
    if (chosen.empty()) {
      out << app.help();
      return 0;
    }
    CLI::App* sub = chosen.front();

    Settings settings;
    if (!config_files[sub].empty()) settings.merge_file(config_files[sub]);
    for (const Binding& b : bindings) {
      if (b.command == sub && b.option->count() > 0) settings.set(b.key, b.value);
    }
    const RunConfig config = resolve(settings);

    const std::string name = sub->get_name();
    if (name == "generate") return cmd_generate(config, out);
    if (name == "fit") return cmd_fit(config, out, err);
    if (name == "predict") return cmd_predict(config, out);
    if (name == "evaluate") return cmd_evaluate(config, out);
    if (name == "gridsearch") return cmd_gridsearch(config, out);
    return cmd_bench(config, out);
  } catch (const Error& e) {
    err << "goal: error " << to_string(e.code()) << " (exit " << e.exit_code()
        << "): " << e.what() << "\n";
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    err << "goal: error " << to_string(ErrorCode::kData) << " (exit "
        << static_cast<int>(ErrorCode::kData) << "): " << e.what() << "\n";
    return static_cast<int>(ErrorCode::kData);
  } catch (const std::exception& e) {
    err << "goal: error INTERNAL_ERROR (exit 1): " << e.what() << "\n";
    return 1;
  }
}

}  // namespace goal::cli
