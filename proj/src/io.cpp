#include "rmhmc/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace rmhmc {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

// JSON has no inf/nan; diverged iterations carry delta_h = inf, so those
// travel as strings.
nlohmann::ordered_json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw std::runtime_error("json matrix: bad number " + j.dump());
}

}  // namespace

void write_matrix_csv(std::ostream& out, const LabeledMatrix& m) {
  if (static_cast<Eigen::Index>(m.columns.size()) != m.values.cols()) {
    throw std::invalid_argument("write_matrix_csv: header width does not match matrix");
  }
  for (std::size_t j = 0; j < m.columns.size(); ++j) out << (j ? "," : "") << m.columns[j];
  out << '\n';
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) out << (j ? "," : "") << m.values(i, j);
    out << '\n';
  }
}

LabeledMatrix read_matrix_csv(std::istream& in) {
  LabeledMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  m.columns = split(line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != m.columns.size()) throw std::runtime_error("csv: ragged row");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(std::stod(c));
    rows.push_back(std::move(row));
  }
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

nlohmann::ordered_json matrix_to_json(const LabeledMatrix& m) {
  nlohmann::ordered_json j;
  j["columns"] = m.columns;
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < m.values.cols(); ++k) row.push_back(number_to_json(m.values(i, k)));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

LabeledMatrix matrix_from_json(const nlohmann::json& j) {
  LabeledMatrix m;
  m.columns = j.at("columns").get<std::vector<std::string>>();
  const auto& rows = j.at("rows");
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.columns.size()) throw std::runtime_error("json matrix: ragged row");
    for (std::size_t k = 0; k < m.columns.size(); ++k) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number_from_json(rows[i][k]);
    }
  }
  return m;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw ConfigError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rmhmc
