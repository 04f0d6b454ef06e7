#include "pcegsa/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pcegsa {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r\n") == std::string::npos; }

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable t;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!blank(line)) break;
  }
  if (row == 0 || blank(line)) throw InputError(source + ": empty CSV");
  t.header = split(line);
  for (const auto& h : t.header)
    if (h.empty()) throw InputError(source + ": empty column name in header");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++row;
    if (blank(line)) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw InputError(source + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                       " fields, expected " + std::to_string(t.header.size()));
    std::vector<double> r(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_number(cells[j], r[j]) || !std::isfinite(r[j]))
        throw InputError(source + ": row " + std::to_string(row) + ", column '" + t.header[j] +
                         "': non-finite or unparsable value '" + cells[j] + "'");
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw InputError(source + ": no data rows");
  t.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < t.header.size(); ++j) t.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv(in, path);
}

Dataset split_response(const CsvTable& table) {
  const auto n = static_cast<Index>(table.header.size());
  if (table.header.back() == "response") {
    if (n < 2) throw InputError("CSV has a response column but no inputs");
    std::vector<std::string> names(table.header.begin(), table.header.end() - 1);
    return {SampleMatrix(table.values.leftCols(n - 1), names), Eigen::VectorXd(table.values.col(n - 1))};
  }
  for (const auto& h : table.header)
    if (h == "response") throw InputError("column 'response' must be the final column");
  return {SampleMatrix(table.values, table.header), std::nullopt};
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++row;
    if (blank(line)) continue;
    const auto cells = split(line);
    std::vector<double> r(cells.size());
    bool numeric = true;
    for (std::size_t j = 0; j < cells.size(); ++j) numeric = numeric && parse_number(cells[j], r[j]);
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw InputError(path + ": row " + std::to_string(row) + " is not numeric");
    }
    first = false;
    rows.push_back(std::move(r));
  }
  const auto d = static_cast<Index>(rows.size());
  if (d == 0) throw InputError(path + ": empty matrix");
  Eigen::MatrixXd m(d, d);
  for (Index i = 0; i < d; ++i) {
    if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != d)
      throw InputError(path + ": matrix must be square");
    for (Index j = 0; j < d; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Eigen::Ref<const Eigen::MatrixXd>& values) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(i, j));
    out << '\n';
  }
}

}  // namespace pcegsa
