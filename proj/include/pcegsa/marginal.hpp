#pragma once

#include "pcegsa/core.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pcegsa {

double normal_cdf(double x);
/// Standard normal quantile; p must lie in (0, 1).
double normal_icdf(double p);

enum class MarginalKind { normal, lognormal, uniform, beta, empirical };

std::string to_string(MarginalKind kind);
MarginalKind parse_marginal_kind(const std::string& name);

/// One input's distribution.
///
/// Parameters per kind:
///   normal     {mean, sd}
///   lognormal  {mu, sigma} of log(Z)
///   uniform    {lower, upper}
///   beta       {alpha, beta, lower, upper}
///   empirical  {} - the smoothed ECDF knots and sample moments carry the state
///
/// The empirical CDF interpolates linearly between the order statistics placed
/// at plotting positions (i - 1/2)/M, extended by half a mean spacing at both
/// ends so that F is continuous, strictly increasing and invertible.
class MarginalModel {
 public:
  static MarginalModel normal(double mean, double sd);
  static MarginalModel lognormal(double mu, double sigma);
  static MarginalModel uniform(double lower, double upper);
  static MarginalModel beta(double alpha, double beta, double lower, double upper);
  static MarginalModel empirical(const Eigen::Ref<const Eigen::VectorXd>& samples, int max_moment_order = 11);

  MarginalKind kind() const { return kind_; }
  const std::vector<double>& parameters() const { return params_; }
  std::pair<double, double> support() const;

  double mean() const { return raw_moment(1); }
  double variance() const;

  /// E[Z^k]. Empirical marginals only know moments up to max_moment_order().
  double raw_moment(int k) const;
  /// (E[Z^0], ..., E[Z^order]).
  Eigen::VectorXd raw_moments(int order) const;
  int max_moment_order() const;

  double cdf(double x) const;
  double icdf(double p) const;

  /// Empirical state, exposed for serialization.
  const std::vector<double>& knots_x() const { return knots_x_; }
  const std::vector<double>& knots_p() const { return knots_p_; }
  const std::vector<double>& stored_moments() const { return moments_; }
  static MarginalModel empirical_from_state(std::vector<double> knots_x, std::vector<double> knots_p,
                                            std::vector<double> moments);

 private:
  MarginalModel(MarginalKind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

  MarginalKind kind_ = MarginalKind::normal;
  std::vector<double> params_;
  std::vector<double> knots_x_;
  std::vector<double> knots_p_;
  std::vector<double> moments_;
};

/// m_i = (1/M) sum x^i for i = 0..max_order, compensated sums.
Eigen::VectorXd empirical_moments(const Eigen::Ref<const Eigen::VectorXd>& samples, int max_order);

/// Fits a marginal of the requested kind. Needs M >= 10 finite, non-constant samples.
MarginalModel fit_marginal(const Eigen::Ref<const Eigen::VectorXd>& samples, MarginalKind kind,
                           int max_moment_order = 11);

}  // namespace pcegsa
