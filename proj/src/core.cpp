#include "pcegsa/core.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

namespace pcegsa {
namespace {
std::atomic<bool> g_warnings{true};
}

void warn(const std::string& message) {
  if (g_warnings) std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings = enabled; }

SampleMatrix::SampleMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  if (values_.rows() < 1 || values_.cols() < 1) throw InputError("sample matrix must have M >= 1 and D >= 1");
  if (static_cast<Index>(names_.size()) != values_.cols())
    throw InputError("sample matrix has " + std::to_string(values_.cols()) + " columns but " +
                     std::to_string(names_.size()) + " names");
  if (!values_.allFinite()) throw InputError("sample matrix contains non-finite values");
}

SampleMatrix::SampleMatrix(Eigen::MatrixXd values)
    : SampleMatrix(values, default_names(values.cols())) {}

Index SampleMatrix::column(const std::string& name) const {
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (names_[j] == name) return static_cast<Index>(j);
  throw InputError("unknown input name '" + name + "'");
}

std::vector<std::string> default_names(Index d) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) names.push_back("Z" + std::to_string(j + 1));
  return names;
}

Moments2 mean_variance(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Index m = x.size();
  Moments2 out;
  if (m == 0) return out;
  KahanSum s;
  for (Index i = 0; i < m; ++i) s.add(x[i]);
  out.mean = s.value() / static_cast<double>(m);
  if (m < 2) return out;
  KahanSum ss;
  for (Index i = 0; i < m; ++i) {
    const double d = x[i] - out.mean;
    ss.add(d * d);
  }
  out.variance = ss.value() / static_cast<double>(m - 1);
  return out;
}

double covariance(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Index m = x.size();
  if (m != y.size()) throw InputError("covariance: length mismatch");
  if (m < 2) return 0.0;
  const double mx = mean_variance(x).mean;
  KahanSum sy;
  for (Index i = 0; i < m; ++i) sy.add(y[i]);
  const double my = sy.value() / static_cast<double>(m);
  KahanSum s;
  for (Index i = 0; i < m; ++i) s.add((x[i] - mx) * (y[i] - my));
  return s.value() / static_cast<double>(m - 1);
}

Eigen::MatrixXd correlation_matrix(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const Index d = x.cols();
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd sd(d);
  for (Index j = 0; j < d; ++j) sd[j] = std::sqrt(mean_variance(x.col(j)).variance);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      const double r = covariance(x.col(i), x.col(j)) / (sd[i] * sd[j]);
      c(i, j) = c(j, i) = r;
    }
  return c;
}

}  // namespace pcegsa
