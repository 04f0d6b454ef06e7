#pragma once

#include "pcegsa/ancova.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace pcegsa {

nlohmann::json smoothing_to_json(const SmoothingResult& s);
nlohmann::json report_to_json(const AncovaReport& r);

/// input,S,S_U,S_C with full precision.
void write_indices_csv(std::ostream& out, const AncovaReport& r);

/// value,probability pairs of the empirical CDF of `y` (i/M at the i-th order statistic).
void write_cdf_csv(std::ostream& out, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Strategies-by-inputs table of one index, as printed to a terminal.
struct IndexTable {
  std::vector<std::string> rows;
  std::vector<std::string> inputs;
  Eigen::MatrixXd values;
};

/// Reads `label,input1,...,inputD` rows; the first line is the header.
IndexTable read_index_table(const std::string& path);

/// Fixed-width text, values rounded to 4 decimals, with a trailing row-sum column.
std::string render_index_table(const IndexTable& table);

/// One report as an aligned text table (4 decimals) followed by sum_check.
std::string render_report(const AncovaReport& r);

/// Rounds half away from zero to 4 decimals, as shown in the tables.
double round4(double v);

}  // namespace pcegsa
