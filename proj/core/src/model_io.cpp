#include <string>

#include <json.hpp>

#include "goal/error.hpp"
#include "goal/io.hpp"

namespace goal {

namespace {

using nlohmann::json;

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& node, Index rows, Index cols,
                        const std::string& name) {
  if (!node.is_array() || static_cast<Index>(node.size()) != rows) {
    throw InvalidInput("model file: " + name + " must have " +
                       std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = node[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw InvalidInput("model file: " + name + " row " + std::to_string(i) +
                         " must have " + std::to_string(cols) + " entries");
    }
    for (Index j = 0; j < cols; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw InvalidInput("model file: " + name + "(" + std::to_string(i) +
                           ", " + std::to_string(j) + ") is not a number");
      }
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

std::string serialize_model(const ModelFile& file) {
  const GaugeModel& m = file.model;
  json doc;
  doc["format"] = "goal-model";
  doc["format_version"] = kModelFormatVersion;
  doc["dimensions"] = {{"D", m.dims()}, {"G", m.gauge()},
                       {"K", m.clusters()}, {"M", m.classes()}};
  doc["eps_cl"] = m.eps_cl;
  doc["lambda_floor"] = m.lambda_floor;
  doc["R"] = to_json(m.r);
  doc["S"] = to_json(m.s);
  doc["Lambda"] = to_json(m.lambda);
  doc["fit"] = {{"seed", file.metadata.seed},
                {"iterations", file.metadata.iterations},
                {"final_objective", file.metadata.final_objective},
                {"converged", file.metadata.converged}};
  return doc.dump(2) + "\n";
}

ModelFile parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("model file: ") + e.what());
  }
  try {
    if (!doc.contains("format_version")) {
      throw InvalidInput("model file: missing format_version");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw InvalidInput("model file: unsupported format_version " +
                         std::to_string(version));
    }
    const json& dims = doc.at("dimensions");
    const Index d = dims.at("D").get<Index>();
    const Index g = dims.at("G").get<Index>();
    const Index k = dims.at("K").get<Index>();
    const Index m = dims.at("M").get<Index>();

    ModelFile file;
    file.model.r = matrix_from_json(doc.at("R"), d, g, "R");
    file.model.s = matrix_from_json(doc.at("S"), g, k, "S");
    file.model.lambda = matrix_from_json(doc.at("Lambda"), m, k, "Lambda");
    file.model.eps_cl = doc.at("eps_cl").get<double>();
    file.model.lambda_floor = doc.at("lambda_floor").get<double>();
    if (doc.contains("fit")) {
      const json& fit = doc.at("fit");
      file.metadata.seed = fit.value("seed", std::uint64_t{0});
      file.metadata.iterations = fit.value("iterations", 0);
      file.metadata.final_objective = fit.value("final_objective", 0.0);
      file.metadata.converged = fit.value("converged", false);
    }
    file.model.validate();
    return file;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
  write_file_atomic(path, serialize_model(file));
}

ModelFile load_model(const std::filesystem::path& path) {
  return parse_model(read_file(path));
}

}  // namespace goal
