#include "pcegsa/basis.hpp"

#include "pcegsa/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace pcegsa {

UnivariateBasis::UnivariateBasis(Eigen::VectorXd a, Eigen::VectorXd b, int requested_degree)
    : a_(std::move(a)), b_(std::move(b)) {
  if (b_.size() < 1) throw InputError("univariate basis needs b_0");
  if (a_.size() < b_.size() - 1) throw InputError("univariate basis needs a_0..a_{p-1}");
  if ((b_.array() <= 0).any()) throw NumericalError("univariate basis: recurrence coefficients b_k must be positive");
  sqrt_b_ = b_.array().sqrt();
  requested_ = requested_degree < 0 ? degree() : requested_degree;
}

Eigen::MatrixXd UnivariateBasis::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::MatrixXd out(x.size(), degree() + 1);
  Eigen::VectorXd row(degree() + 1);
  for (Index i = 0; i < x.size(); ++i) {
    evaluate(x[i], row);
    out.row(i) = row.transpose();
  }
  return out;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

UnivariateBasis build_univariate_basis(const Eigen::Ref<const Eigen::VectorXd>& moments, int p) {
  if (p < 0) throw InputError("basis degree must be >= 0");
  if (moments.size() < 2 * p + 1)
    throw InputError("degree " + std::to_string(p) + " needs " + std::to_string(2 * p + 1) + " moments, got " +
                     std::to_string(moments.size()));
  if (!moments.allFinite()) throw InputError("moments must be finite");
  if (std::abs(moments[0] - 1.0) > 1e-12) throw InputError("moment m_0 must equal 1 (normalized measure)");
  if (p == 0) return UnivariateBasis(Eigen::VectorXd::Zero(0), Eigen::VectorXd::Ones(1), 0);

  const double mu = moments[1];
  const double var = moments[2] - mu * mu;
  if (!(var > 0)) throw NumericalError("invalid moment sequence: non-positive variance");
  const double sd = std::sqrt(var);

  // Moments of (Z - mu)/sd.
  const int n = std::min<int>(static_cast<int>(moments.size()) - 1, 2 * p + 1);
  Eigen::VectorXd s(n + 1);
  for (int k = 0; k <= n; ++k) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) acc += binomial(k, i) * moments[i] * std::pow(-mu, k - i);
    s[k] = acc / std::pow(sd, k);
  }

  // Upper Cholesky factor of the Hankel matrix, column by column.
  const int size = p + 1;
  const bool extra = n >= 2 * p + 1;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(size, size + 1);
  int usable = size;
  for (int k = 0; k < size; ++k) {
    double d = s[2 * k];
    for (int i = 0; i < k; ++i) d -= r(i, k) * r(i, k);
    if (d < -1e-10 * s[2 * k]) throw NumericalError("invalid moment sequence: negative recurrence coefficient b_" +
                                                    std::to_string(k));
    if (d <= 1e-12 * s[2 * k]) {
      usable = k;
      break;
    }
    r(k, k) = std::sqrt(d);
    const int last = extra ? size : size - 1;
    for (int j = k + 1; j <= last; ++j) {
      double v = s[k + j];
      for (int i = 0; i < k; ++i) v -= r(i, k) * r(i, j);
      r(k, j) = v / r(k, k);
    }
  }
  const int degree = usable - 1;
  if (degree < p)
    warn("Hankel moment matrix ill-conditioned: basis degree reduced from " + std::to_string(p) + " to " +
         std::to_string(degree));
  if (degree < 1) throw NumericalError("moment sequence supports no polynomial of degree >= 1");

  const int na = (degree == p && extra) ? degree + 1 : degree;
  Eigen::VectorXd a(na), b(degree + 1);
  b[0] = 1.0;
  for (int k = 0; k < na; ++k) {
    const double cur = r(k, k + 1) / r(k, k);
    const double prev = k == 0 ? 0.0 : r(k - 1, k) / r(k - 1, k - 1);
    a[k] = mu + sd * (cur - prev);
  }
  for (int k = 1; k <= degree; ++k) {
    const double ratio = r(k, k) / r(k - 1, k - 1);
    b[k] = var * ratio * ratio;
  }
  return UnivariateBasis(std::move(a), std::move(b), p);
}

UnivariateBasis hermite_basis(int p) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(p + 1);
  Eigen::VectorXd b(p + 1);
  b[0] = 1.0;
  for (int k = 1; k <= p; ++k) b[k] = k;
  return UnivariateBasis(std::move(a), std::move(b), p);
}

MultiIndex::MultiIndex(std::vector<int> k) : k_(std::move(k)) {
  for (int v : k_)
    if (v < 0) throw InputError("multi-index entries must be non-negative");
}

int MultiIndex::total_degree() const {
  int s = 0;
  for (int v : k_) s += v;
  return s;
}

std::vector<int> MultiIndex::support() const {
  std::vector<int> s;
  for (std::size_t j = 0; j < k_.size(); ++j)
    if (k_[j] > 0) s.push_back(static_cast<int>(j));
  return s;
}

std::string to_string(const MultiIndex& k) {
  std::string s = "(";
  for (Index j = 0; j < k.size(); ++j) s += (j ? "," : "") + std::to_string(k[j]);
  return s + ")";
}

std::vector<MultiIndex> total_degree_indices(Index d, int p) {
  if (d < 1) throw InputError("total_degree_indices: D must be >= 1");
  if (p < 0) throw InputError("total_degree_indices: p must be >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  // Compositions of `left` into positions j..d-1, first position largest first.
  std::function<void(Index, int)> fill = [&](Index j, int left) {
    if (j == d - 1) {
      k[static_cast<std::size_t>(j)] = left;
      out.emplace_back(k);
      k[static_cast<std::size_t>(j)] = 0;
      return;
    }
    for (int v = left; v >= 0; --v) {
      k[static_cast<std::size_t>(j)] = v;
      fill(j + 1, left - v);
    }
    k[static_cast<std::size_t>(j)] = 0;
  };
  for (int t = 0; t <= p; ++t) fill(0, t);
  return out;
}

std::uint64_t total_degree_count(Index d, int p) {
  // count[t] = number of compositions of t into the variables seen so far
  std::vector<std::uint64_t> count(static_cast<std::size_t>(p) + 1, 0);
  count[0] = 1;
  for (Index j = 0; j < d; ++j)
    for (int t = 1; t <= p; ++t) count[static_cast<std::size_t>(t)] += count[static_cast<std::size_t>(t - 1)];
  std::uint64_t total = 0;
  for (auto c : count) total += c;
  return total;
}

BasisSet::BasisSet(std::vector<UnivariateBasis> univariate, std::vector<MultiIndex> indices)
    : univariate_(std::move(univariate)), indices_(std::move(indices)) {
  if (univariate_.empty()) throw InputError("basis set needs at least one variable");
  if (indices_.empty() || !indices_.front().is_zero())
    throw InputError("basis set must start with the all-zeros multi-index");
  std::set<MultiIndex> seen;
  factors_.reserve(indices_.size());
  for (const auto& k : indices_) {
    if (k.size() != dim()) throw InputError("multi-index length does not match basis dimension");
    if (!seen.insert(k).second) throw InputError("duplicate multi-index " + to_string(k));
    std::vector<std::pair<int, int>> f;
    for (int j : k.support()) {
      if (k[j] > univariate_[static_cast<std::size_t>(j)].degree())
        throw InputError("multi-index " + to_string(k) + " exceeds the degree of variable " + std::to_string(j + 1));
      f.emplace_back(j, k[j]);
    }
    factors_.push_back(std::move(f));
  }
}

BasisSet BasisSet::total_degree(std::vector<UnivariateBasis> univariate, int p) {
  const auto d = static_cast<Index>(univariate.size());
  std::vector<MultiIndex> kept;
  for (auto& k : total_degree_indices(d, p)) {
    bool ok = true;
    for (Index j = 0; j < d && ok; ++j) ok = k[j] <= univariate[static_cast<std::size_t>(j)].degree();
    if (ok) kept.push_back(std::move(k));
  }
  return BasisSet(std::move(univariate), std::move(kept));
}

int BasisSet::max_degree() const {
  int m = 0;
  for (const auto& k : indices_) m = std::max(m, k.total_degree());
  return m;
}

BasisSet BasisSet::subset(const std::vector<Index>& positions) const {
  std::vector<MultiIndex> kept;
  kept.reserve(positions.size());
  for (Index l : positions) kept.push_back(indices_.at(static_cast<std::size_t>(l)));
  return BasisSet(univariate_, std::move(kept));
}

Eigen::MatrixXd evaluate_basis(const BasisSet& basis, const Eigen::Ref<const Eigen::MatrixXd>& points) {
  if (points.cols() != basis.dim())
    throw InputError("evaluate_basis: points have " + std::to_string(points.cols()) + " columns, basis expects " +
                     std::to_string(basis.dim()));
  const Index m = points.rows(), d = basis.dim(), l = basis.size();
  Eigen::MatrixXd psi(m, l);
  std::vector<int> offset(static_cast<std::size_t>(d) + 1, 0);
  for (Index j = 0; j < d; ++j)
    offset[static_cast<std::size_t>(j) + 1] = offset[static_cast<std::size_t>(j)] + basis.univariate()[static_cast<std::size_t>(j)].degree() + 1;

  parallel_for(static_cast<std::size_t>(m), [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd table(offset.back());
    for (std::size_t ii = begin; ii < end; ++ii) {
      const auto i = static_cast<Index>(ii);
      for (Index j = 0; j < d; ++j) {
        const auto& u = basis.univariate()[static_cast<std::size_t>(j)];
        u.evaluate(points(i, j), table.segment(offset[static_cast<std::size_t>(j)], u.degree() + 1));
      }
      for (Index c = 0; c < l; ++c) {
        double v = 1.0;
        for (const auto& [var, deg] : basis.factors(c)) v *= table[offset[static_cast<std::size_t>(var)] + deg];
        psi(i, c) = v;
      }
    }
  });
  return psi;
}

}  // namespace pcegsa
