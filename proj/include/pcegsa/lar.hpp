#pragma once

#include "pcegsa/core.hpp"

#include <vector>

namespace pcegsa {

/// Nested active sets produced by least angle regression, stored as the order
/// in which columns entered.
struct LarPath {
  std::vector<Index> entry_order;

  std::size_t steps() const { return entry_order.size(); }
  /// Active set after `k` steps (the first k entries).
  std::vector<Index> active_set(std::size_t k) const {
    return {entry_order.begin(), entry_order.begin() + static_cast<std::ptrdiff_t>(k)};
  }
};

/// Classical (non-lasso) LAR on the columns of `design` after centering and
/// scaling them to unit norm; `y` is centered. Runs until min(M-1, L) columns
/// are active or the residual correlation vanishes. Ties go to the smaller
/// column index; numerically collinear candidates are skipped with a warning.
LarPath lar_path(const Eigen::Ref<const Eigen::MatrixXd>& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                 Index max_active = -1);

/// Corrected leave-one-out error of the least-squares fit of `y` on an
/// intercept plus the `active_set` columns of `design`:
///
///   e = T * (1/M) sum_i (r_i / (1 - h_i))^2 / Var(y),
///   T = M/(M-P) * (1 + tr((Psi^T Psi)^-1)),
///
/// with P = |active_set| + 1 and Psi = [1, design_A]. Throws NumericalError
/// when the fit interpolates (some h_i = 1) and InputError when P >= M.
double corrected_loo_error(const Eigen::Ref<const Eigen::MatrixXd>& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                           const std::vector<Index>& active_set);

/// Incremental form of corrected_loo_error for a growing active set. Each
/// add_column costs O(M P + P^2) through Gram-Schmidt on [1, design_A].
class LooTracker {
 public:
  explicit LooTracker(const Eigen::Ref<const Eigen::VectorXd>& y);

  /// Appends a column; false (and no change) if it is numerically dependent.
  bool add_column(const Eigen::Ref<const Eigen::VectorXd>& x);
  /// Current e_cloo, or +infinity when saturated (P >= M or some h_i = 1).
  double error() const;
  Index terms() const { return p_; }

 private:
  Eigen::VectorXd y_;
  double var_y_ = 0.0;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd rinv_;
  Eigen::VectorXd hat_;
  Eigen::VectorXd residual_;
  double trace_inv_ = 0.0;
  Index p_ = 0;
};

}  // namespace pcegsa
