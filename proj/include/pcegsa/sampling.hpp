#pragma once

#include "pcegsa/core.hpp"
#include "pcegsa/dependence.hpp"
#include "pcegsa/marginal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pcegsa {

enum class Design { plain, lhs };

Design parse_design(const std::string& name);
std::string to_string(Design design);

/// Draws M rows from the Gaussian copula `dep` with the given marginals.
///
/// Each row is a pure function of (seed, stream, row), so the output is
/// bitwise identical for any worker count. With Design::lhs the probability
/// levels of every column are re-stratified by rank so that each stratum
/// [k/M, (k+1)/M) holds exactly one point; rank dependence is inherited from
/// the copula draw.
SampleMatrix sample_correlated(const std::vector<MarginalModel>& marginals, const DependenceModel& dep, Index m,
                               std::uint64_t seed, Design design = Design::lhs, std::uint64_t stream = 0,
                               std::vector<std::string> names = {});

/// Probability levels F_j(Z_j) produced by the same draw (useful for stratification checks).
Eigen::MatrixXd sample_probability_levels(Index d, const DependenceModel& dep, Index m, std::uint64_t seed,
                                          Design design, std::uint64_t stream = 0);

}  // namespace pcegsa
