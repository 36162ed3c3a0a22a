#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "goal/error.hpp"
#include "goal/io.hpp"

namespace goal {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Delimiter 0 means runs of blanks.
std::vector<std::string_view> split_line(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  if (delimiter == 0) {
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(" \t\r", pos);
      if (start == std::string_view::npos) break;
      auto end = line.find_first_of(" \t\r", start);
      if (end == std::string_view::npos) end = line.size();
      cells.push_back(line.substr(start, end - start));
      pos = end;
    }
    return cells;
  }
  std::size_t start = 0;
  for (;;) {
    const auto end = line.find(delimiter, start);
    cells.push_back(trim(line.substr(start, end == std::string_view::npos
                                                ? std::string_view::npos
                                                : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& value) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

char detect_delimiter(std::string_view line) {
  for (char c : {',', ';', '\t'}) {
    if (line.find(c) != std::string_view::npos) return c;
  }
  return 0;
}

std::string location(const std::filesystem::path& path, std::size_t line,
                     std::size_t column) {
  return path.string() + ": line " + std::to_string(line) + ", column " +
         std::to_string(column);
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Table read_table(const std::filesystem::path& path,
                 std::optional<char> delimiter) {
  const std::string text = read_file(path);
  std::vector<std::vector<double>> rows;
  Table table;
  std::optional<char> delim = delimiter;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::size_t width_line = 0;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!delim) delim = detect_delimiter(line);
    const auto cells = split_line(line, *delim);

    std::vector<double> row(cells.size());
    std::size_t bad = cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_number(cells[c], row[c])) {
        bad = c;
        break;
      }
    }
    if (bad < cells.size()) {
      if (rows.empty() && table.header.empty()) {
        for (auto cell : cells) table.header.emplace_back(cell);
        width = cells.size();
        width_line = line_no;
        continue;
      }
      throw InvalidInput(location(path, line_no, bad + 1) + ": '" +
                         std::string(cells[bad]) + "' is not a number");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        throw InvalidInput(location(path, line_no, c + 1) +
                           ": non-finite value");
      }
    }
    if (width == 0) {
      width = row.size();
      width_line = line_no;
    } else if (row.size() != width) {
      throw InvalidInput(path.string() + ": line " + std::to_string(line_no) +
                         " has " + std::to_string(row.size()) +
                         " cells, line " + std::to_string(width_line) +
                         " has " + std::to_string(width));
    }
    rows.push_back(std::move(row));
    table.lines.push_back(line_no);
  }
  if (rows.empty()) throw InvalidInput(path.string() + ": no numeric rows");

  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return table;
}

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw NumericalError("cannot format number");
  return std::string(buffer, ptr);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::random_device entropy;
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(entropy());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw InvalidInput("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

void write_table(const std::filesystem::path& path, const Matrix& values,
                 const std::vector<std::string>& header, char delimiter) {
  std::string out;
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) out += delimiter;
      out += header[j];
    }
    out += '\n';
  }
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out += delimiter;
      out += format_number(values(i, j));
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

Orientation orientation_from_string(const std::string& name) {
  if (name == "instances") return Orientation::kInstances;
  if (name == "features") return Orientation::kFeatures;
  throw ConfigError("--rows must be 'instances' or 'features', got '" + name +
                    "'");
}

Matrix load_features(const std::filesystem::path& features,
                     Orientation orientation) {
  Table table = read_table(features);
  if (orientation == Orientation::kInstances) {
    return table.values.transpose();
  }
  return std::move(table.values);
}

DataSet load_dataset(const std::filesystem::path& features,
                     const std::filesystem::path& labels,
                     Orientation orientation) {
  Matrix x = load_features(features, orientation);
  const Table table = read_table(labels);
  const bool by_instance = orientation == Orientation::kInstances;
  const Index instances = by_instance ? table.values.rows() : table.values.cols();
  const Index width = by_instance ? table.values.cols() : table.values.rows();

  // File coordinates (1-based line and column) of entry (class m, instance t).
  auto where = [&](Index m, Index t) {
    const Index row = by_instance ? t : m;
    const Index col = by_instance ? m : t;
    return labels.string() + ": line " +
           std::to_string(table.lines[static_cast<std::size_t>(row)]) +
           ", column " + std::to_string(col + 1);
  };

  if (instances != x.cols()) {
    throw InvalidInput("labels file has " + std::to_string(instances) +
                       " instances, features file has " +
                       std::to_string(x.cols()));
  }

  Matrix pi;
  if (width == 1) {
    std::vector<int> binary(static_cast<std::size_t>(instances));
    for (Index t = 0; t < instances; ++t) {
      const double v = by_instance ? table.values(t, 0) : table.values(0, t);
      if (v != 0.0 && v != 1.0) {
        throw InvalidInput(where(0, t) + ": binary label must be 0 or 1, got " +
                           format_number(v));
      }
      binary[static_cast<std::size_t>(t)] = static_cast<int>(v);
    }
    pi = DataSet::one_hot_binary(binary);
  } else {
    pi = by_instance ? Matrix(table.values.transpose()) : table.values;
    for (Index t = 0; t < pi.cols(); ++t) {
      for (Index m = 0; m < pi.rows(); ++m) {
        if (pi(m, t) < 0.0 || pi(m, t) > 1.0) {
          throw InvalidInput(where(m, t) + ": probability " +
                             format_number(pi(m, t)) + " outside [0, 1]");
        }
      }
      const double sum = pi.col(t).sum();
      if (std::abs(sum - 1.0) > 1e-6) {
        throw InvalidInput(where(0, t) + ": label probabilities of instance " +
                           std::to_string(t + 1) + " sum to " +
                           format_number(sum) + ", not 1");
      }
      pi.col(t) /= sum;
    }
  }
  return DataSet(std::move(x), std::move(pi));
}

void save_dataset(const DataSet& data, const std::filesystem::path& features,
                  const std::filesystem::path& labels) {
  std::vector<std::string> header;
  for (Index d = 0; d < data.dims(); ++d) header.push_back("x" + std::to_string(d + 1));
  write_table(features, data.x().transpose(), header);

  const Matrix& pi = data.pi();
  const bool one_hot_binary =
      pi.rows() == 2 &&
      ((pi.array() == 0.0) || (pi.array() == 1.0)).all();
  if (one_hot_binary) {
    write_table(labels, pi.row(0).transpose(), {"label"});
    return;
  }
  std::vector<std::string> label_header;
  for (Index m = 0; m < pi.rows(); ++m) label_header.push_back("p" + std::to_string(m));
  write_table(labels, pi.transpose(), label_header);
}

}  // namespace goal
