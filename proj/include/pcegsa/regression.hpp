#pragma once

#include "pcegsa/basis.hpp"
#include "pcegsa/core.hpp"
#include "pcegsa/dependence.hpp"
#include "pcegsa/marginal.hpp"
#include "pcegsa/transforms.hpp"

#include <string>
#include <vector>

namespace pcegsa {

/// How input dependence is handled when building the surrogate.
///
///   correlate   basis orthonormal w.r.t. each marginal, fitted on Z directly
///   nataf       Hermite basis fitted on U = Nataf(Z)
///   rosenblatt  Hermite basis fitted on U = Rosenblatt(Z)
enum class Strategy { correlate, nataf, rosenblatt };

/// PCE_correlate, PCE_NT, PCE_RT.
std::string to_string(Strategy s);
/// Short name used on the command line and in file names.
std::string short_name(Strategy s);
/// Accepts the short names, the PCE_* labels and nt/rt.
Strategy parse_strategy(const std::string& name);
TransformKind transform_kind(Strategy s);
inline constexpr Strategy kAllStrategies[] = {Strategy::correlate, Strategy::nataf, Strategy::rosenblatt};

struct FitOptions {
  int p_max = 5;
  double target_error = 1e-6;
  /// Relative gain an order must achieve to count as an improvement.
  double min_improvement = 0.01;
  /// Stop after this many consecutive orders without improvement.
  int patience = 2;
  std::vector<int> rosenblatt_ordering;
};

struct OrderRecord {
  int p = 0;
  Index candidates = 0;  ///< total-degree basis size at this order
  Index active = 0;      ///< selected non-constant terms
  double e_cloo = 0.0;
};

struct FitInfo {
  int p_selected = 0;
  double e_cloo = 0.0;
  Index active_set_size = 0;  ///< non-constant terms retained
  Index m_p = 0;
  std::size_t clipped = 0;  ///< CDF values clipped by the transform during fitting
  std::vector<OrderRecord> history;
};

/// Sparse PCE surrogate. Immutable after construction.
class PceModel {
 public:
  PceModel() = default;
  /// `basis` holds only the retained terms, the zero index first.
  PceModel(Strategy strategy, std::vector<std::string> names, std::vector<MarginalModel> marginals,
           DependenceModel dependence, BasisSet basis, Eigen::VectorXd coefficients, FitInfo info,
           std::vector<int> ordering = {});

  Strategy strategy() const { return strategy_; }
  Index dim() const { return basis_.dim(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<MarginalModel>& marginals() const { return transform_.marginals(); }
  const DependenceModel& dependence() const { return transform_.dependence(); }
  const IsoTransform& transform() const { return transform_; }
  const BasisSet& basis() const { return basis_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  const FitInfo& info() const { return info_; }
  /// Highest total degree among retained terms.
  int degree() const { return basis_.max_degree(); }

  /// Points at which the basis is evaluated. For nataf/rosenblatt the default
  /// substitutes Z for U; `faithful` applies the transform first.
  Eigen::MatrixXd basis_points(const Eigen::Ref<const Eigen::MatrixXd>& z, bool faithful = false) const;
  Eigen::MatrixXd design(const Eigen::Ref<const Eigen::MatrixXd>& z, bool faithful = false) const;
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::MatrixXd>& z, bool faithful = false) const;
  Eigen::VectorXd predict(const SampleMatrix& z, bool faithful = false) const {
    return predict(z.values(), faithful);
  }

 private:
  Strategy strategy_ = Strategy::correlate;
  std::vector<std::string> names_;
  IsoTransform transform_;
  BasisSet basis_;
  Eigen::VectorXd coefficients_;
  FitInfo info_;
};

/// Univariate bases of degree p in the strategy's input space: marginal
/// moments for correlate, standard normal moments otherwise.
std::vector<UnivariateBasis> strategy_univariate_bases(Strategy s, const std::vector<MarginalModel>& marginals, int p);

/// Sparse PCE by LAR with order selection on the corrected LOO error; the
/// selected terms are refitted by ordinary least squares.
PceModel fit_pce(const SampleMatrix& inputs, const Eigen::Ref<const Eigen::VectorXd>& y, Strategy strategy,
                 const std::vector<MarginalModel>& marginals, const DependenceModel& dep,
                 const FitOptions& options = {});

}  // namespace pcegsa
