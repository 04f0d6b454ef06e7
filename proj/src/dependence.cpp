#include "pcegsa/dependence.hpp"

#include "pcegsa/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcegsa {

void validate_correlation(const Eigen::Ref<const Eigen::MatrixXd>& r, const std::string& what) {
  if (r.rows() != r.cols() || r.rows() < 1) throw InputError(what + ": correlation matrix must be square");
  if (!r.allFinite()) throw InputError(what + ": correlation matrix has non-finite entries");
  for (Index i = 0; i < r.rows(); ++i) {
    if (r(i, i) != 1.0) throw InputError(what + ": correlation diagonal must be exactly 1");
    for (Index j = 0; j < i; ++j)
      if (std::abs(r(i, j) - r(j, i)) > 1e-12) throw InputError(what + ": correlation matrix not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-10)
    throw InputError(what + ": correlation matrix is not positive definite (min eigenvalue " +
                     std::to_string(es.eigenvalues().minCoeff()) + ")");
}

DependenceModel::DependenceModel(Eigen::MatrixXd copula, Eigen::MatrixXd fictive)
    : copula_(std::move(copula)), fictive_(std::move(fictive)) {
  validate_correlation(copula_, "copula correlation");
  validate_correlation(fictive_, "fictive correlation");
  if (copula_.rows() != fictive_.rows()) throw InputError("copula and fictive correlation sizes differ");
}

DependenceModel DependenceModel::independent(Index d) {
  return {Eigen::MatrixXd::Identity(d, d), Eigen::MatrixXd::Identity(d, d)};
}

DependenceModel DependenceModel::from_copula(const Eigen::MatrixXd& copula) { return {copula, copula}; }

DependenceModel DependenceModel::from_parts(const Eigen::MatrixXd& copula, const Eigen::MatrixXd& fictive) {
  return {copula, fictive};
}

DependenceModel DependenceModel::from_pearson(const std::vector<MarginalModel>& marginals,
                                              const Eigen::MatrixXd& pearson) {
  const Eigen::MatrixXd fictive = ::pcegsa::fictive_correlation(marginals, pearson);
  return {fictive, fictive};
}

DependenceModel DependenceModel::estimate(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                          const std::vector<MarginalModel>& marginals) {
  if (static_cast<Index>(marginals.size()) != samples.cols())
    throw InputError("dependence estimate: marginal count does not match columns");
  Eigen::MatrixXd copula = correlation_matrix(normal_scores(samples));
  copula.diagonal().setOnes();
  Eigen::MatrixXd fictive;
  try {
    Eigen::MatrixXd pearson = correlation_matrix(samples);
    pearson.diagonal().setOnes();
    fictive = ::pcegsa::fictive_correlation(marginals, pearson);
    validate_correlation(fictive, "fictive correlation");
  } catch (const std::exception& e) {
    warn(std::string("Nataf fictive correlation infeasible for sample Pearson matrix (") + e.what() +
         "); using the Gaussian-rank estimate");
    fictive = copula;
  }
  return {copula, fictive};
}

bool DependenceModel::is_independent() const {
  const Index d = dim();
  return copula_.isApprox(Eigen::MatrixXd::Identity(d, d), 0.0) &&
         fictive_.isApprox(Eigen::MatrixXd::Identity(d, d), 0.0);
}

Eigen::MatrixXd equicorrelation(Index d, double rho) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Constant(d, d, rho);
  r.diagonal().setOnes();
  return r;
}

Eigen::MatrixXd ar1_correlation(Index d, double rho) {
  Eigen::MatrixXd r(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) r(i, j) = i == j ? 1.0 : std::pow(rho, static_cast<double>(std::abs(i - j)));
  return r;
}

Eigen::MatrixXd normal_scores(const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  const Index m = samples.rows();
  Eigen::MatrixXd out(m, samples.cols());
  std::vector<Index> order(static_cast<std::size_t>(m));
  for (Index j = 0; j < samples.cols(); ++j) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return samples(a, j) < samples(b, j); });
    for (Index r = 0; r < m; ++r)
      out(order[static_cast<std::size_t>(r)], j) = normal_icdf((static_cast<double>(r) + 0.5) / static_cast<double>(m));
  }
  return out;
}

}  // namespace pcegsa
