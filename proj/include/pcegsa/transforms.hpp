#pragma once

#include "pcegsa/core.hpp"
#include "pcegsa/dependence.hpp"
#include "pcegsa/marginal.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pcegsa {

enum class TransformKind { identity, nataf, rosenblatt };

std::string to_string(TransformKind kind);
TransformKind parse_transform_kind(const std::string& name);

/// Probabilities F(z) are clipped into [kCdfClip, 1 - kCdfClip] before the probit.
inline constexpr double kCdfClip = 1e-12;

struct TransformResult {
  Eigen::MatrixXd values;
  std::size_t clipped = 0;  ///< number of clipped CDF values
};

/// Isoprobabilistic map between correlated physical space Z and independent
/// standard normal space U.
///
///   nataf:       U = L^-1 Phi^-1(F(Z)),  L = chol(fictive correlation)
///   rosenblatt:  U_k = probit of the conditional CDF of Z_k given its
///                predecessors in `ordering`, under the Gaussian copula
///   identity:    U = Z
class IsoTransform {
 public:
  IsoTransform() = default;
  IsoTransform(TransformKind kind, std::vector<MarginalModel> marginals, DependenceModel dep,
               std::vector<int> ordering = {});

  static IsoTransform identity(std::vector<MarginalModel> marginals, DependenceModel dep) {
    return IsoTransform(TransformKind::identity, std::move(marginals), std::move(dep));
  }

  TransformKind kind() const { return kind_; }
  Index dim() const { return static_cast<Index>(marginals_.size()); }
  const std::vector<MarginalModel>& marginals() const { return marginals_; }
  const DependenceModel& dependence() const { return *dep_; }
  /// Lower Cholesky factor of the Gaussian-space correlation in `ordering` order.
  const Eigen::MatrixXd& cholesky_factor() const { return chol_; }
  const std::vector<int>& ordering() const { return ordering_; }

  TransformResult forward(const Eigen::Ref<const Eigen::MatrixXd>& z) const;
  Eigen::MatrixXd inverse(const Eigen::Ref<const Eigen::MatrixXd>& u) const;

 private:
  TransformKind kind_ = TransformKind::identity;
  std::vector<MarginalModel> marginals_;
  std::shared_ptr<const DependenceModel> dep_;
  Eigen::MatrixXd chol_;
  std::vector<int> ordering_;
};

TransformResult nataf_forward(const SampleMatrix& z, const IsoTransform& t);
SampleMatrix nataf_inverse(const SampleMatrix& u, const IsoTransform& t);
TransformResult rosenblatt_forward(const SampleMatrix& z, const IsoTransform& t);
SampleMatrix rosenblatt_inverse(const SampleMatrix& u, const IsoTransform& t);

/// Pearson correlation of F_i^-1(Phi(X)), F_j^-1(Phi(Y)) for standard normals
/// X, Y with correlation rho0, by 2-D Gauss-Hermite quadrature.
double nataf_pearson(const MarginalModel& mi, const MarginalModel& mj, double rho0);

/// Per-pair Nataf solve: the Gaussian correlation rho0 whose induced Pearson
/// correlation matches the target (bisection to 1e-6; closed forms for
/// normal/lognormal pairs). Throws InputError for infeasible targets.
Eigen::MatrixXd fictive_correlation(const std::vector<MarginalModel>& marginals, const Eigen::MatrixXd& target_pearson);

/// Gauss-Hermite rule for the standard normal weight (Golub-Welsch).
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
QuadratureRule gauss_hermite(int n);

}  // namespace pcegsa
