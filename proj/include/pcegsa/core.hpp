#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcegsa {

using Index = Eigen::Index;

/// Bad user input: malformed files, invalid parameters, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation that cannot proceed numerically (non-PD matrices, saturated fits, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Warning sink. Writes to stderr unless silenced; never touches stdout.
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

/// M samples of D named inputs, one row per sample.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(Eigen::MatrixXd values, std::vector<std::string> names);
  explicit SampleMatrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const { return values_; }
  const std::vector<std::string>& names() const { return names_; }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  double operator()(Index i, Index j) const { return values_(i, j); }

  /// Index of a named column; throws InputError if absent.
  Index column(const std::string& name) const;

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
};

/// Default column labels Z1..ZD.
std::vector<std::string> default_names(Index d);

/// Two-pass sample mean/variance with (M-1) denominator and compensated sums.
struct Moments2 {
  double mean = 0.0;
  double variance = 0.0;
};
Moments2 mean_variance(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Sample covariance with (M-1) denominator.
double covariance(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Pearson correlation matrix of the columns.
Eigen::MatrixXd correlation_matrix(const Eigen::Ref<const Eigen::MatrixXd>& x);

/// Neumaier-compensated accumulator.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pcegsa
