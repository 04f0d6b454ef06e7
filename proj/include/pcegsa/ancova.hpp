#pragma once

#include "pcegsa/core.hpp"
#include "pcegsa/marginal.hpp"
#include "pcegsa/regression.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pcegsa {

/// One HDMR component G_beta: the model terms whose multi-index support is beta.
struct HdmrTerm {
  std::vector<int> subset;         ///< beta, 0-based, ascending
  std::vector<Index> positions;    ///< term positions in the model basis
  Eigen::VectorXd coefficients;
};

/// Groups the non-constant terms by support. Singletons first (by input),
/// then larger subsets in lexicographic order.
std::vector<HdmrTerm> extract_hdmr(const PceModel& model);

struct AncovaIndex {
  std::string input;
  double s = 0.0;    ///< Cov[Y, G_j] / Var[Y]
  double s_u = 0.0;  ///< Var[G_j] / Var[Y]
  double s_c = 0.0;  ///< s - s_u
};

struct SmoothingResult {
  std::vector<int> set;
  std::vector<std::string> names;
  double sigma_before = 0.0;
  double sigma_after = 0.0;
  double delta_sigma = 0.0;  ///< (sigma_after - sigma_before) / sigma_before
  bool all_smoothed = false;
  /// Reference (Monte Carlo) sigma_after and the relative deviation from it.
  std::optional<double> reference_sigma_after;
  std::optional<double> delta_sigma_rr;
};

struct AncovaReport {
  std::string strategy;
  Index m_l = 0;
  double mean = 0.0;
  double variance = 0.0;
  double sum_check = 0.0;          ///< sum over all beta of Cov[Y, G_beta] / Var[Y]
  double interaction_share = 0.0;  ///< part of sum_check from |beta| >= 2
  bool faithful = false;
  std::vector<AncovaIndex> indices;
  std::vector<int> ranking;  ///< inputs by S descending, then S_U descending, then position
  std::vector<SmoothingResult> smoothing;
};

/// Builds a report from a response sample and its first-order components
/// (column j of `first_order` is G_j). `higher_order_cov` lists
/// Cov[Y, G_beta] for the remaining terms. Sample moments use M-1.
AncovaReport assemble_report(std::string strategy, const std::vector<std::string>& names,
                             const Eigen::Ref<const Eigen::VectorXd>& y,
                             const Eigen::Ref<const Eigen::MatrixXd>& first_order,
                             const std::vector<double>& higher_order_cov);

/// ANCOVA indices of the surrogate on an evaluation sample from the physical
/// (correlated) input distribution. The default evaluates every model at Z
/// directly. With `faithful`, nataf/rosenblatt models are evaluated through
/// their transform and the components come from a cut decomposition anchored
/// at the marginal means.
AncovaReport ancova_indices(const PceModel& model, const SampleMatrix& inputs, bool faithful = false);

/// Ranking rule shared by every report.
std::vector<int> rank_inputs(const std::vector<AncovaIndex>& indices);

struct SobolIndices {
  Eigen::VectorXd first;
  Eigen::VectorXd total;
};

/// Variance shares computed from the coefficients of an orthonormal basis.
/// Meaningful only for independent variables; warns for a correlate model on
/// dependent inputs.
SobolIndices sobol_indices(const PceModel& model);

using ResponseFn = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

/// Sets the columns in `set` to their marginal means (jointly) and compares
/// the response standard deviation before and after.
SmoothingResult smooth_and_requantify(const ResponseFn& response, const std::vector<MarginalModel>& marginals,
                                      const SampleMatrix& inputs, const std::vector<int>& set);

/// Fills the reference fields of `result` from a smoothing run on the true model.
void attach_reference(SmoothingResult& result, const SmoothingResult& reference);

/// Resolves input names (or 1-based positions) to column indices.
std::vector<int> resolve_inputs(const std::vector<std::string>& names, const std::vector<std::string>& requested);

}  // namespace pcegsa
