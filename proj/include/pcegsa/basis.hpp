#pragma once

#include "pcegsa/core.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pcegsa {

/// Orthonormal polynomials phi_0..phi_p of one variable, stored through the
/// monic three-term recurrence
///
///   pi_{k+1}(x) = (x - a_k) pi_k(x) - b_k pi_{k-1}(x),   b_0 = 1,
///
/// with phi_k = pi_k / sqrt(b_1 ... b_k).
class UnivariateBasis {
 public:
  UnivariateBasis() = default;
  /// `a` holds a_0..a_{p-1} (optionally a_p), `b` holds b_0..b_p.
  UnivariateBasis(Eigen::VectorXd a, Eigen::VectorXd b, int requested_degree = -1);

  int degree() const { return static_cast<int>(b_.size()) - 1; }
  /// Degree asked for before any conditioning-driven reduction.
  int requested_degree() const { return requested_; }
  const Eigen::VectorXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }

  /// phi_0(x)..phi_degree(x) into `out` (length degree+1).
  template <typename Out>
  void evaluate(double x, Out&& out) const {
    out[0] = 1.0;
    if (degree() == 0) return;
    out[1] = (x - a_[0]) / sqrt_b_[1];
    for (int k = 1; k < degree(); ++k) out[k + 1] = ((x - a_[k]) * out[k] - sqrt_b_[k] * out[k - 1]) / sqrt_b_[k + 1];
  }

  /// M x (degree+1) table of phi_k(x_i).
  Eigen::MatrixXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd sqrt_b_;
  int requested_ = 0;
};

/// Moment-based construction: Cholesky factorization of the Hankel matrix of
/// the (internally standardized) moments yields the recurrence.
///
/// `moments` must start with m_0 = 1 and hold at least 2p+1 entries; a 2p+2-th
/// entry additionally fixes a_p. Trailing pivots below 1e-12 of the diagonal
/// reduce the degree with a warning; clearly negative pivots mean the sequence
/// is not a moment sequence and raise NumericalError.
UnivariateBasis build_univariate_basis(const Eigen::Ref<const Eigen::VectorXd>& moments, int p);

/// Degrees k_1..k_D of one tensor-product polynomial.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> k);
  static MultiIndex zeros(Index d) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0)); }

  Index size() const { return static_cast<Index>(k_.size()); }
  int operator[](Index j) const { return k_[static_cast<std::size_t>(j)]; }
  int total_degree() const;
  bool is_zero() const { return total_degree() == 0; }
  /// Variables with k_j > 0, ascending.
  std::vector<int> support() const;
  const std::vector<int>& degrees() const { return k_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> k_;
};

std::string to_string(const MultiIndex& k);

/// All k with |k|_1 <= p: ascending total degree, and within a degree
/// lexicographically descending (so (1,0) precedes (0,1)). First entry is zero.
std::vector<MultiIndex> total_degree_indices(Index d, int p);

/// Number of such indices computed by counting (no closed form), for sizes too
/// large to enumerate.
std::uint64_t total_degree_count(Index d, int p);

/// Multivariate tensor-product basis: a list of multi-indices over D univariate bases.
class BasisSet {
 public:
  BasisSet() = default;
  BasisSet(std::vector<UnivariateBasis> univariate, std::vector<MultiIndex> indices);

  /// Total-degree basis of degree p, dropping indices beyond any variable's available degree.
  static BasisSet total_degree(std::vector<UnivariateBasis> univariate, int p);

  Index dim() const { return static_cast<Index>(univariate_.size()); }
  Index size() const { return static_cast<Index>(indices_.size()); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const std::vector<UnivariateBasis>& univariate() const { return univariate_; }
  int max_degree() const;

  /// Same univariate bases, restricted to the given positions (position 0 must be kept first).
  BasisSet subset(const std::vector<Index>& positions) const;

  /// Sparse form of index l: (variable, degree) pairs with degree > 0.
  const std::vector<std::pair<int, int>>& factors(Index l) const { return factors_[static_cast<std::size_t>(l)]; }

 private:
  std::vector<UnivariateBasis> univariate_;
  std::vector<MultiIndex> indices_;
  std::vector<std::vector<std::pair<int, int>>> factors_;
};

/// M x L matrix Psi(i, l) = prod_j phi^j_{k_lj}(x_ij). Row-parallel.
Eigen::MatrixXd evaluate_basis(const BasisSet& basis, const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Univariate basis for the standard normal measure (probabilists' Hermite, orthonormal).
UnivariateBasis hermite_basis(int p);

}  // namespace pcegsa
