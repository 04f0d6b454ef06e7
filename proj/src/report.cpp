#include "pcegsa/report.hpp"

#include "pcegsa/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pcegsa {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", round4(v));
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

double round4(double v) { return std::round(v * 1e4) / 1e4; }

json smoothing_to_json(const SmoothingResult& s) {
  json j;
  j["inputs"] = s.names;
  j["sigma_before"] = s.sigma_before;
  j["sigma_after"] = s.sigma_after;
  j["delta_sigma_pct"] = 100.0 * s.delta_sigma;
  j["all_smoothed"] = s.all_smoothed;
  j["reference_sigma_after"] = optional_number(s.reference_sigma_after);
  j["delta_sigma_rr_pct"] = s.delta_sigma_rr ? json(100.0 * *s.delta_sigma_rr) : json(nullptr);
  return j;
}

json report_to_json(const AncovaReport& r) {
  json j;
  j["strategy"] = r.strategy;
  j["M_L"] = r.m_l;
  j["faithful"] = r.faithful;
  j["mean"] = r.mean;
  j["variance"] = r.variance;
  j["sum_check"] = r.sum_check;
  j["interaction_share"] = r.interaction_share;
  json idx = json::array();
  for (const auto& a : r.indices) idx.push_back({{"input", a.input}, {"S", a.s}, {"S_U", a.s_u}, {"S_C", a.s_c}});
  j["indices"] = std::move(idx);
  json rank = json::array();
  for (int k : r.ranking) rank.push_back(r.indices[static_cast<std::size_t>(k)].input);
  j["ranking"] = std::move(rank);
  if (!r.smoothing.empty()) {
    json s = json::array();
    for (const auto& x : r.smoothing) s.push_back(smoothing_to_json(x));
    j["smoothing"] = std::move(s);
  }
  return j;
}

void write_indices_csv(std::ostream& out, const AncovaReport& r) {
  out << "input,S,S_U,S_C\n";
  for (const auto& a : r.indices)
    out << a.input << ',' << format_double(a.s) << ',' << format_double(a.s_u) << ',' << format_double(a.s_c) << '\n';
}

void write_cdf_csv(std::ostream& out, const Eigen::Ref<const Eigen::VectorXd>& y) {
  std::vector<double> v(y.data(), y.data() + y.size());
  std::sort(v.begin(), v.end());
  out << "value,probability\n";
  const double m = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out << format_double(v[i]) << ',' << format_double(static_cast<double>(i + 1) / m) << '\n';
}

IndexTable read_index_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  IndexTable t;
  std::string line;
  std::size_t row = 0;
  std::vector<std::vector<double>> vals;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (t.inputs.empty()) {
      if (cells.size() < 2) throw InputError(path + ": header needs a label column and at least one input");
      t.inputs.assign(cells.begin() + 1, cells.end());
      continue;
    }
    if (cells.size() != t.inputs.size() + 1)
      throw InputError(path + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                       " fields, expected " + std::to_string(t.inputs.size() + 1));
    t.rows.push_back(cells[0]);
    std::vector<double> r;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      double v = 0;
      const auto& s = cells[c];
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw InputError(path + ": row " + std::to_string(row) + ", column " + std::to_string(c + 1) +
                         ": not a number: '" + s + "'");
      r.push_back(v);
    }
    vals.push_back(std::move(r));
  }
  if (t.rows.empty()) throw InputError(path + ": no data rows");
  t.values.resize(static_cast<Index>(vals.size()), static_cast<Index>(t.inputs.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t k = 0; k < vals[i].size(); ++k) t.values(static_cast<Index>(i), static_cast<Index>(k)) = vals[i][k];
  return t;
}

std::string render_index_table(const IndexTable& table) {
  std::size_t lw = 8;
  for (const auto& r : table.rows) lw = std::max(lw, r.size());
  std::size_t cw = 8;
  for (const auto& s : table.inputs) cw = std::max(cw, s.size() + 1);

  std::string out = std::string(lw, ' ');
  for (const auto& s : table.inputs) out += pad(s, cw);
  out += pad("Sum", cw) + '\n';
  for (Index i = 0; i < table.values.rows(); ++i) {
    std::string label = table.rows[static_cast<std::size_t>(i)];
    out += label + std::string(lw - label.size(), ' ');
    double sum = 0.0;
    for (Index k = 0; k < table.values.cols(); ++k) {
      const double v = round4(table.values(i, k));
      sum += v;
      out += pad(fixed4(v), cw);
    }
    out += pad(fixed4(sum), cw) + '\n';
  }
  return out;
}

std::string render_report(const AncovaReport& r) {
  std::size_t w = 6;
  for (const auto& a : r.indices) w = std::max(w, a.input.size());
  std::string out = r.strategy + (r.faithful ? " (faithful)" : "") + "  M_L=" + std::to_string(r.m_l) + '\n';
  out += pad("input", w) + pad("S", 10) + pad("S_U", 10) + pad("S_C", 10) + '\n';
  for (int k : r.ranking) {
    const auto& a = r.indices[static_cast<std::size_t>(k)];
    out += pad(a.input, w) + pad(fixed4(a.s), 10) + pad(fixed4(a.s_u), 10) + pad(fixed4(a.s_c), 10) + '\n';
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "interactions %.4f  sum_check %.12f\n", r.interaction_share, r.sum_check);
  return out + buf;
}

}  // namespace pcegsa
