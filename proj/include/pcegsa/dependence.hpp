#pragma once

#include "pcegsa/core.hpp"
#include "pcegsa/marginal.hpp"

#include <vector>

namespace pcegsa {

/// Throws InputError unless `r` is a symmetric correlation matrix with unit
/// diagonal whose eigenvalues all exceed 1e-10.
void validate_correlation(const Eigen::Ref<const Eigen::MatrixXd>& r, const std::string& what);

/// Gaussian-copula dependence over D inputs.
///
/// `copula_correlation` parameterizes the Gaussian copula and drives sampling
/// and the Rosenblatt map. `fictive_correlation` is the Nataf matrix obtained
/// from a Pearson target; under an exact Gaussian copula both coincide, and they
/// differ only when estimated separately from data.
class DependenceModel {
 public:
  static DependenceModel independent(Index d);
  static DependenceModel from_copula(const Eigen::MatrixXd& copula);
  static DependenceModel from_parts(const Eigen::MatrixXd& copula, const Eigen::MatrixXd& fictive);
  /// Solves the Nataf problem per pair so that the induced Pearson correlation matches `pearson`.
  static DependenceModel from_pearson(const std::vector<MarginalModel>& marginals, const Eigen::MatrixXd& pearson);
  /// Gaussian-rank (normal-score) copula estimate; the fictive matrix is the Nataf
  /// solution for the sample Pearson matrix, falling back to the rank estimate
  /// when that solution is infeasible.
  static DependenceModel estimate(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                  const std::vector<MarginalModel>& marginals);

  Index dim() const { return copula_.rows(); }
  const Eigen::MatrixXd& copula_correlation() const { return copula_; }
  const Eigen::MatrixXd& fictive_correlation() const { return fictive_; }
  bool is_independent() const;

 private:
  DependenceModel(Eigen::MatrixXd copula, Eigen::MatrixXd fictive);
  Eigen::MatrixXd copula_;
  Eigen::MatrixXd fictive_;
};

/// Equicorrelated matrix with off-diagonal rho.
Eigen::MatrixXd equicorrelation(Index d, double rho);

/// Correlation rho^|i-j|.
Eigen::MatrixXd ar1_correlation(Index d, double rho);

/// Normal scores Phi^-1((rank - 1/2)/M) of each column, ties by row order.
Eigen::MatrixXd normal_scores(const Eigen::Ref<const Eigen::MatrixXd>& samples);

}  // namespace pcegsa
