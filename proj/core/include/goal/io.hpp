#ifndef GOAL_IO_HPP
#define GOAL_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "goal/matrix.hpp"
#include "goal/model.hpp"

namespace goal {

// ------------------------------------------------------------------ tables

struct Table {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<std::size_t> lines;   // 1-based source line of each row
  Matrix values;                    // rows x cols as on disk
};

/// Reads a delimiter-separated numeric table. The delimiter is detected
/// from the first data line (comma, semicolon, tab, then whitespace) unless
/// given. A first row with a non-numeric cell is treated as a header. Errors
/// name 1-based line and column.
Table read_table(const std::filesystem::path& path,
                 std::optional<char> delimiter = std::nullopt);

/// Shortest round-trip decimal rendering of a double.
std::string format_number(double value);

/// Writes `values` row by row. Written to a temporary file then renamed.
void write_table(const std::filesystem::path& path, const Matrix& values,
                 const std::vector<std::string>& header = {},
                 char delimiter = ',');

/// Writes `contents` to `path` through a sibling temporary file and a
/// rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------- datasets

enum class Orientation { kInstances, kFeatures };

Orientation orientation_from_string(const std::string& name);

/// Loads features and labels. With Orientation::kInstances each file row is
/// an instance. Labels are either one 0/1 column (expanded to two one-hot
/// rows, label 1 first) or M probability columns.
DataSet load_dataset(const std::filesystem::path& features,
                     const std::filesystem::path& labels,
                     Orientation orientation = Orientation::kInstances);

Matrix load_features(const std::filesystem::path& features,
                     Orientation orientation = Orientation::kInstances);

/// Writes X with one row per instance and a single 0/1 label column (binary
/// Pi) or M probability columns.
void save_dataset(const DataSet& data, const std::filesystem::path& features,
                  const std::filesystem::path& labels);

// ------------------------------------------------------------------ models

inline constexpr int kModelFormatVersion = 1;

struct FitMetadata {
  std::uint64_t seed = 0;
  int iterations = 0;
  double final_objective = 0.0;
  bool converged = false;
};

struct ModelFile {
  GaugeModel model;
  FitMetadata metadata;
};

/// Versioned JSON document; matrices as row-major nested arrays rendered at
/// full precision.
std::string serialize_model(const ModelFile& file);
ModelFile parse_model(const std::string& text);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace goal

#endif  // GOAL_IO_HPP
