#ifndef GOAL_TOOLS_RUN_CONFIG_HPP
#define GOAL_TOOLS_RUN_CONFIG_HPP

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "goal/datagen.hpp"
#include "goal/evaluation.hpp"
#include "goal/io.hpp"
#include "goal/model.hpp"
#include "goal/scaling.hpp"

namespace goal::cli {

/// Flat key -> text store behind every command. Keys use underscores; the
/// matching flag is the key with dashes (eps_cl <-> --eps-cl).
class Settings {
 public:
  static const std::set<std::string>& known_keys();

  /// Merges a JSON object of key -> scalar or array. Unknown keys throw
  /// ConfigError naming the key.
  void merge_json_text(const std::string& text, const std::string& origin);
  void merge_file(const std::filesystem::path& path);

  /// Flags are applied after the file, so they win.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key,
                              const std::vector<double>& fallback) const;
  std::vector<long long> integers(const std::string& key,
                                  const std::vector<long long>& fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Typed view of the settings used by the subcommands.
struct RunConfig {
  std::filesystem::path features;
  std::filesystem::path labels;
  Orientation rows = Orientation::kInstances;
  std::filesystem::path model = "model.json";
  std::filesystem::path out;
  std::filesystem::path out_dir = ".";
  std::filesystem::path report;

  FitConfig fit;
  SplitPlan split;
  GridSpec grid;
  WormsSpec worms;
  double test_fraction = 0.0;
  ScalingSpec bench;

  double threshold = 0.5;
  Index positive_row = 0;
};

/// Defaults, then `settings` (already file-then-flag merged).
RunConfig resolve(const Settings& settings);

}  // namespace goal::cli

#endif  // GOAL_TOOLS_RUN_CONFIG_HPP
