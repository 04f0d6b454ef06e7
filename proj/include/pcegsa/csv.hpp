#pragma once

#include "pcegsa/core.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pcegsa {

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

/// Parses a numeric CSV with a header row. Decimal points are locale-independent;
/// a non-finite or unparsable entry raises InputError naming the row (1-based,
/// header is row 1) and column.
CsvTable parse_csv(std::istream& in, const std::string& source = "<csv>");
CsvTable read_csv(const std::string& path);

/// Input matrix plus the optional trailing `response` column.
struct Dataset {
  SampleMatrix inputs;
  std::optional<Eigen::VectorXd> response;
};
Dataset split_response(const CsvTable& table);

/// Square matrix from CSV, with or without a header row.
Eigen::MatrixXd read_matrix_csv(const std::string& path);

/// Round-trip decimal text with 17 significant digits.
std::string format_double(double v);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Eigen::Ref<const Eigen::MatrixXd>& values);

}  // namespace pcegsa
