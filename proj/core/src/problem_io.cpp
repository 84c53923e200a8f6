#include "affproj/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace affproj {

namespace {

using nlohmann::json;

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows, const std::string& what) {
  if (rows.empty()) {
    throw ConfigError(what + ": empty matrix");
  }
  const auto cols = rows.front().size();
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ConfigError(what + ": row " + std::to_string(i + 1) + " has " +
                        std::to_string(rows[i].size()) + " entries, expected " +
                        std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  require_finite(out, what.c_str());
  return out;
}

Matrix matrix_field(const json& doc, const char* key, const std::filesystem::path& base_dir) {
  if (!doc.contains(key)) {
    throw ConfigError(std::string("problem file: missing '") + key + "'");
  }
  const auto& node = doc.at(key);
  if (node.is_string()) {
    return read_matrix_csv(base_dir / node.get<std::string>());
  }
  return matrix_from_rows(node.get<std::vector<std::vector<double>>>(), key);
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        throw ConfigError("matrix CSV line " + std::to_string(line_no) + ": bad number '" +
                          cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return matrix_from_rows(rows, "matrix CSV");
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open matrix file " + path.string());
  }
  return read_matrix_csv(in);
}

ProblemFile parse_problem_json(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem file: ") + e.what());
  }
  try {
    ProblemFile out;
    out.pencil.m = matrix_field(doc, "M", base_dir);
    out.pencil.d = matrix_field(doc, "D", base_dir);
    out.pencil.k = matrix_field(doc, "K", base_dir);
    const auto n = out.pencil.m.rows();
    for (const Matrix* m : {&out.pencil.m, &out.pencil.d, &out.pencil.k}) {
      if (m->rows() != n || m->cols() != n) {
        throw DimensionError("problem file: M, D and K must be square and of equal size");
      }
    }
    if (!doc.contains("targets") || !doc.at("targets").is_array() || doc.at("targets").empty()) {
      throw ConfigError("problem file: 'targets' must be a nonempty array");
    }
    for (const auto& t : doc.at("targets")) {
      mmup::Target target;
      target.mu = {t.at("mu_re").get<double>(), t.value("mu_im", 0.0)};
      const auto re = t.at("y_re").get<std::vector<double>>();
      const auto im = t.value("y_im", std::vector<double>(re.size(), 0.0));
      if (re.size() != im.size()) {
        throw ConfigError("problem file: y_re and y_im differ in length");
      }
      target.y.resize(static_cast<Eigen::Index>(re.size()));
      for (std::size_t i = 0; i < re.size(); ++i) {
        target.y(static_cast<Eigen::Index>(i)) = {re[i], im[i]};
      }
      target.conjugate_pair = t.value("conjugate", target.mu.imag() != 0.0);
      out.targets.pairs.push_back(std::move(target));
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem file: ") + e.what());
  }
}

ProblemFile load_problem_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open problem file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_json(ss.str(), path.parent_path());
}

}  // namespace affproj
