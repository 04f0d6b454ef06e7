#pragma once

#include "pcegsa/ancova.hpp"
#include "pcegsa/bench_models.hpp"
#include "pcegsa/sampling.hpp"

#include <cstdint>
#include <vector>

namespace pcegsa {

/// Substream used for the Monte Carlo reference sample.
inline constexpr std::uint64_t kOracleStream = 3;

/// ANCOVA indices of `y` on `z` with G_j(z_j) = E[Y | Z_j] - G_0 estimated by
/// `bins` equal-probability bins. Bins left empty by ties are merged into
/// their neighbour. The unexplained remainder is reported as interaction.
AncovaReport binned_ancova(const SampleMatrix& z, const Eigen::Ref<const Eigen::VectorXd>& y, int bins,
                           const std::string& label = "MC");

/// Monte Carlo reference: M plain draws from the benchmark's distribution.
/// Uses the closed-form HDMR when the model has one, otherwise binning.
AncovaReport mc_ancova(const TestModel& model, Index m, std::uint64_t seed, int bins = 50);

/// Same estimator on a caller-supplied sample.
AncovaReport mc_ancova_on(const TestModel& model, const SampleMatrix& z, int bins = 50);

/// Closed-form indices of Y = a^T Z against those of the substituted model
/// Y' = (L^T D a)^T Z, where Cov[Z] = D R D and R = L L^T.
struct SubstitutionError {
  std::vector<AncovaIndex> exact;
  std::vector<AncovaIndex> substituted;
  std::vector<AncovaIndex> delta;  ///< substituted - exact
  Eigen::VectorXd substituted_coefficients;
};
SubstitutionError transform_substitution_error(const Eigen::VectorXd& a, const Eigen::MatrixXd& sigma);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_x - F_y|.
double ks_statistic(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Largest absolute difference over S, S_U and S_C.
double max_index_error(const std::vector<AncovaIndex>& estimate, const std::vector<AncovaIndex>& reference);

}  // namespace pcegsa
