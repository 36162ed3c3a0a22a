#include "cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "goal/error.hpp"

namespace goal::cli {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) {
      parts.push_back(item.substr(first, last - first + 1));
    }
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ConfigError("setting '" + key + "': '" + text + "' is not a number");
  }
  return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("setting '" + key + "': '" + text +
                      "' is not an integer");
  }
  return value;
}

std::string scalar_text(const nlohmann::json& node, const std::string& key) {
  if (node.is_string()) return node.get<std::string>();
  if (node.is_boolean()) return node.get<bool>() ? "true" : "false";
  if (node.is_number_integer()) return std::to_string(node.get<long long>());
  if (node.is_number()) return format_number(node.get<double>());
  throw ConfigError("setting '" + key + "': unsupported value " + node.dump());
}

}  // namespace

const std::set<std::string>& Settings::known_keys() {
  static const std::set<std::string> keys{
      // paths
      "features", "labels", "rows", "model", "out", "out_dir", "report",
      // fit
      "K", "G", "eps_cl", "eps_e", "tol", "lambda_floor", "max_iter",
      "restarts", "seed",
      // prediction
      "threshold", "positive_row",
      // splits
      "split", "train_fraction", "validation_fraction", "folds", "replicates",
      "stratified", "split_seed",
      // generate
      "T", "D", "minority_fraction", "noise_scale", "signal_scale",
      "ring_radius", "ring_width", "test_fraction",
      // bench
      "sweep", "from", "to", "factor", "fixed", "iterations", "repeats"};
  return keys;
}

void Settings::merge_json_text(const std::string& text,
                               const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(origin + ": expected a JSON object");
  for (const auto& [key, node] : doc.items()) {
    if (!known_keys().contains(key)) {
      throw ConfigError(origin + ": unknown key '" + key + "'");
    }
    if (node.is_array()) {
      std::string joined;
      for (const auto& item : node) {
        if (!joined.empty()) joined += ',';
        joined += scalar_text(item, key);
      }
      values_[key] = joined;
    } else {
      values_[key] = scalar_text(node, key);
    }
  }
}

void Settings::merge_file(const std::filesystem::path& path) {
  merge_json_text(read_file(path), path.string());
}

void Settings::set(const std::string& key, const std::string& value) {
  if (!known_keys().contains(key)) {
    throw ConfigError("unknown setting '" + key + "'");
  }
  values_[key] = value;
}

bool Settings::has(const std::string& key) const {
  return values_.contains(key);
}

std::string Settings::text(const std::string& key,
                           const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Settings::number(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

long long Settings::integer(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_integer(key, it->second);
}

bool Settings::boolean(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("setting '" + key + "': '" + it->second +
                    "' is not true/false");
}

std::vector<double> Settings::numbers(const std::string& key,
                                      const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& part : split_list(it->second)) {
    out.push_back(parse_double(key, part));
  }
  if (out.empty()) throw ConfigError("setting '" + key + "' is empty");
  return out;
}

std::vector<long long> Settings::integers(
    const std::string& key, const std::vector<long long>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<long long> out;
  for (const auto& part : split_list(it->second)) {
    out.push_back(parse_integer(key, part));
  }
  if (out.empty()) throw ConfigError("setting '" + key + "' is empty");
  return out;
}

RunConfig resolve(const Settings& s) {
  RunConfig c;
  c.features = s.text("features", "");
  c.labels = s.text("labels", "");
  c.rows = orientation_from_string(s.text("rows", "instances"));
  c.model = s.text("model", "model.json");
  c.out = s.text("out", "");
  c.out_dir = s.text("out_dir", ".");
  c.report = s.text("report", "");

  const auto ks = s.integers("K", {2});
  const auto gs = s.integers("G", {2});
  const auto eps = s.numbers("eps_cl", {1.0});

  FitConfig& fit = c.fit;
  fit.clusters = static_cast<Index>(ks.front());
  fit.gauge = static_cast<Index>(gs.front());
  fit.eps_cl = eps.front();
  if (s.has("eps_e")) fit.eps_e = s.number("eps_e", 0.0);
  fit.tol = s.number("tol", fit.tol);
  fit.lambda_floor = s.number("lambda_floor", fit.lambda_floor);
  fit.max_iter = static_cast<int>(s.integer("max_iter", fit.max_iter));
  fit.n_restarts = static_cast<int>(s.integer("restarts", fit.n_restarts));
  const long long seed = s.integer("seed", 0);
  if (seed < 0) throw ConfigError("setting 'seed' must be >= 0");
  fit.seed = static_cast<std::uint64_t>(seed);

  c.grid.base = fit;
  c.grid.clusters.assign(ks.begin(), ks.end());
  c.grid.gauges.assign(gs.begin(), gs.end());
  c.grid.eps_cl = eps;

  c.threshold = s.number("threshold", 0.5);
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) {
    throw ConfigError("setting 'threshold' must lie in (0, 1)");
  }
  c.positive_row = static_cast<Index>(s.integer("positive_row", 0));

  SplitPlan& split = c.split;
  split.kind = split_kind_from_string(s.text("split", "holdout"));
  split.train_fraction = s.number("train_fraction", split.train_fraction);
  split.validation_fraction =
      s.number("validation_fraction", split.validation_fraction);
  split.folds = static_cast<int>(s.integer("folds", split.folds));
  split.replicates = static_cast<int>(s.integer("replicates", split.replicates));
  split.stratified = s.boolean("stratified", true);
  const long long split_seed = s.integer("split_seed", seed);
  if (split_seed < 0) throw ConfigError("setting 'split_seed' must be >= 0");
  split.seed = static_cast<std::uint64_t>(split_seed);

  WormsSpec& worms = c.worms;
  worms.instances = static_cast<Index>(s.integer("T", worms.instances));
  worms.dims = static_cast<Index>(s.integer("D", worms.dims));
  worms.minority_fraction = s.number("minority_fraction", worms.minority_fraction);
  worms.noise_scale = s.number("noise_scale", worms.noise_scale);
  worms.signal_scale = s.number("signal_scale", worms.signal_scale);
  worms.ring_radius = s.number("ring_radius", worms.ring_radius);
  worms.ring_width = s.number("ring_width", worms.ring_width);
  worms.seed = fit.seed;
  c.test_fraction = s.number("test_fraction", 0.0);
  if (!(c.test_fraction >= 0.0 && c.test_fraction < 1.0)) {
    throw ConfigError("setting 'test_fraction' must lie in [0, 1)");
  }

  ScalingSpec& bench = c.bench;
  bench.axis = sweep_axis_from_string(s.text("sweep", "D"));
  bench.from = static_cast<Index>(s.integer("from", bench.from));
  bench.to = static_cast<Index>(s.integer("to", bench.to));
  bench.factor = s.number("factor", bench.factor);
  const Index fixed_default = bench.axis == SweepAxis::kDims
                                  ? bench.fixed_instances
                                  : bench.fixed_dims;
  const auto fixed = static_cast<Index>(s.integer("fixed", fixed_default));
  (bench.axis == SweepAxis::kDims ? bench.fixed_instances : bench.fixed_dims) =
      fixed;
  if (s.has("K")) bench.clusters = fit.clusters;
  if (s.has("G")) bench.gauge = fit.gauge;
  if (s.has("eps_cl")) bench.eps_cl = fit.eps_cl;
  bench.iterations = static_cast<int>(s.integer("iterations", bench.iterations));
  bench.repeats = static_cast<int>(s.integer("repeats", bench.repeats));
  bench.seed = fit.seed;
  return c;
}

}  // namespace goal::cli
