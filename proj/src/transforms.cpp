#include "pcegsa/transforms.hpp"

#include "pcegsa/basis.hpp"
#include "pcegsa/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

namespace pcegsa {
namespace {

constexpr int kQuadratureNodes = 40;

// Gaussian-space coordinate w = Phi^-1(F(z)); exact for normal/lognormal marginals.
double to_gaussian(const MarginalModel& m, double z, std::size_t& clipped) {
  const auto& p = m.parameters();
  switch (m.kind()) {
    case MarginalKind::normal: return (z - p[0]) / p[1];
    case MarginalKind::lognormal:
      if (z > 0) return (std::log(z) - p[0]) / p[1];
      break;
    default: break;
  }
  double f = m.cdf(z);
  if (f < kCdfClip || f > 1.0 - kCdfClip) {
    ++clipped;
    f = std::clamp(f, kCdfClip, 1.0 - kCdfClip);
  }
  return normal_icdf(f);
}

double from_gaussian(const MarginalModel& m, double w) {
  const auto& p = m.parameters();
  switch (m.kind()) {
    case MarginalKind::normal: return p[0] + p[1] * w;
    case MarginalKind::lognormal: return std::exp(p[0] + p[1] * w);
    default: break;
  }
  return m.icdf(std::clamp(normal_cdf(w), 0.0, 1.0));
}

Eigen::MatrixXd permuted(const Eigen::MatrixXd& r, const std::vector<int>& order) {
  const auto d = static_cast<Index>(order.size());
  Eigen::MatrixXd out(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) out(i, j) = r(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  return out;
}

struct PearsonQuadrature {
  QuadratureRule rule;
  Eigen::VectorXd gi_nodes;
  double mi = 0, si = 0, mj = 0, sj = 0;
};

PearsonQuadrature prepare(const MarginalModel& a, const MarginalModel& b) {
  PearsonQuadrature q;
  q.rule = gauss_hermite(kQuadratureNodes);
  const Index n = q.rule.nodes.size();
  q.gi_nodes.resize(n);
  Eigen::VectorXd gj(n);
  for (Index k = 0; k < n; ++k) {
    q.gi_nodes[k] = from_gaussian(a, q.rule.nodes[k]);
    gj[k] = from_gaussian(b, q.rule.nodes[k]);
  }
  // Quadrature-consistent moments so that rho0 = 0 maps to exactly zero.
  q.mi = q.rule.weights.dot(q.gi_nodes);
  q.mj = q.rule.weights.dot(gj);
  q.si = std::sqrt(q.rule.weights.dot((q.gi_nodes.array() - q.mi).square().matrix()));
  q.sj = std::sqrt(q.rule.weights.dot((gj.array() - q.mj).square().matrix()));
  return q;
}

double pearson_at(const PearsonQuadrature& q, const MarginalModel& b, double rho0) {
  const Index n = q.rule.nodes.size();
  const double c = std::sqrt(std::max(0.0, 1.0 - rho0 * rho0));
  double acc = 0.0;
  for (Index s = 0; s < n; ++s) {
    double inner = 0.0;
    for (Index t = 0; t < n; ++t)
      inner += q.rule.weights[t] * (from_gaussian(b, rho0 * q.rule.nodes[s] + c * q.rule.nodes[t]) - q.mj);
    acc += q.rule.weights[s] * (q.gi_nodes[s] - q.mi) * inner;
  }
  return acc / (q.si * q.sj);
}

bool gaussian_family(const MarginalModel& m) {
  return m.kind() == MarginalKind::normal || m.kind() == MarginalKind::lognormal;
}

// Closed-form inverse of the Pearson map for normal/lognormal pairs.
double closed_form_fictive(const MarginalModel& a, const MarginalModel& b, double rho) {
  const auto scale = [](const MarginalModel& m) {
    const double s = m.parameters()[1];
    return m.kind() == MarginalKind::normal ? std::pair{s, s} : std::pair{s, std::sqrt(std::expm1(s * s))};
  };
  const auto [sa, ca] = scale(a);
  const auto [sb, cb] = scale(b);
  if (a.kind() == MarginalKind::normal && b.kind() == MarginalKind::normal) return rho;
  if (a.kind() == MarginalKind::lognormal && b.kind() == MarginalKind::lognormal) {
    const double arg = 1.0 + rho * ca * cb;
    if (!(arg > 0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(arg) / (sa * sb);
  }
  // one normal, one lognormal: Pearson = rho0 * sigma / sqrt(exp(sigma^2) - 1)
  const double sigma = a.kind() == MarginalKind::lognormal ? sa : sb;
  const double c = a.kind() == MarginalKind::lognormal ? ca : cb;
  return rho * c / sigma;
}

}  // namespace

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::identity: return "identity";
    case TransformKind::nataf: return "nataf";
    case TransformKind::rosenblatt: return "rosenblatt";
  }
  return "unknown";
}

TransformKind parse_transform_kind(const std::string& name) {
  for (auto k : {TransformKind::identity, TransformKind::nataf, TransformKind::rosenblatt})
    if (to_string(k) == name) return k;
  throw InputError("unknown transform kind '" + name + "'");
}

QuadratureRule gauss_hermite(int n) {
  const UnivariateBasis h = hermite_basis(n);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) jacobi(k, k + 1) = jacobi(k + 1, k) = std::sqrt(h.b()[k + 1]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = es.eigenvectors().row(0).array().square().transpose();
  return rule;
}

IsoTransform::IsoTransform(TransformKind kind, std::vector<MarginalModel> marginals, DependenceModel dep,
                           std::vector<int> ordering)
    : kind_(kind), marginals_(std::move(marginals)), dep_(std::make_shared<const DependenceModel>(std::move(dep))) {
  const Index d = dim();
  if (d < 1) throw InputError("transform needs at least one marginal");
  if (dep_->dim() != d) throw InputError("transform: dependence dimension does not match marginal count");
  if (ordering.empty()) {
    ordering.resize(static_cast<std::size_t>(d));
    std::iota(ordering.begin(), ordering.end(), 0);
  }
  std::vector<int> check = ordering;
  std::sort(check.begin(), check.end());
  for (Index j = 0; j < d; ++j)
    if (static_cast<Index>(check.size()) != d || check[static_cast<std::size_t>(j)] != j)
      throw InputError("transform ordering must be a permutation of 0..D-1");
  if (kind_ == TransformKind::nataf && ordering != check)
    throw InputError("the Nataf transform uses the natural input order");
  ordering_ = std::move(ordering);

  const Eigen::MatrixXd& r = kind_ == TransformKind::nataf ? dep_->fictive_correlation() : dep_->copula_correlation();
  Eigen::LLT<Eigen::MatrixXd> llt(permuted(r, ordering_));
  if (llt.info() != Eigen::Success) throw InputError("transform correlation is not positive definite");
  chol_ = llt.matrixL();
}

TransformResult IsoTransform::forward(const Eigen::Ref<const Eigen::MatrixXd>& z) const {
  if (z.cols() != dim()) throw InputError("transform: input has wrong dimension");
  TransformResult out;
  out.values.resize(z.rows(), z.cols());
  if (kind_ == TransformKind::identity) {
    out.values = z;
    return out;
  }
  const Index d = dim();
  std::atomic<std::size_t> clipped{0};
  parallel_for(static_cast<std::size_t>(z.rows()), [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd w(d);
    std::size_t local = 0;
    for (std::size_t ii = begin; ii < end; ++ii) {
      const auto i = static_cast<Index>(ii);
      for (Index k = 0; k < d; ++k) {
        const int v = ordering_[static_cast<std::size_t>(k)];
        w[k] = to_gaussian(marginals_[static_cast<std::size_t>(v)], z(i, v), local);
      }
      chol_.triangularView<Eigen::Lower>().solveInPlace(w);
      for (Index k = 0; k < d; ++k) out.values(i, ordering_[static_cast<std::size_t>(k)]) = w[k];
    }
    clipped += local;
  });
  out.clipped = clipped;
  if (out.clipped > 0) warn(std::to_string(out.clipped) + " CDF values clipped to [1e-12, 1-1e-12]");
  return out;
}

Eigen::MatrixXd IsoTransform::inverse(const Eigen::Ref<const Eigen::MatrixXd>& u) const {
  if (u.cols() != dim()) throw InputError("transform: input has wrong dimension");
  if (kind_ == TransformKind::identity) return u;
  const Index d = dim();
  Eigen::MatrixXd z(u.rows(), u.cols());
  parallel_for(static_cast<std::size_t>(u.rows()), [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd g(d);
    for (std::size_t ii = begin; ii < end; ++ii) {
      const auto i = static_cast<Index>(ii);
      for (Index k = 0; k < d; ++k) g[k] = u(i, ordering_[static_cast<std::size_t>(k)]);
      const Eigen::VectorXd w = chol_.triangularView<Eigen::Lower>() * g;
      for (Index k = 0; k < d; ++k) {
        const int v = ordering_[static_cast<std::size_t>(k)];
        z(i, v) = from_gaussian(marginals_[static_cast<std::size_t>(v)], w[k]);
      }
    }
  });
  return z;
}

TransformResult nataf_forward(const SampleMatrix& z, const IsoTransform& t) {
  if (t.kind() != TransformKind::nataf) throw InputError("nataf_forward needs a Nataf transform");
  return t.forward(z.values());
}

SampleMatrix nataf_inverse(const SampleMatrix& u, const IsoTransform& t) {
  if (t.kind() != TransformKind::nataf) throw InputError("nataf_inverse needs a Nataf transform");
  return SampleMatrix(t.inverse(u.values()), u.names());
}

TransformResult rosenblatt_forward(const SampleMatrix& z, const IsoTransform& t) {
  if (t.kind() != TransformKind::rosenblatt) throw InputError("rosenblatt_forward needs a Rosenblatt transform");
  return t.forward(z.values());
}

SampleMatrix rosenblatt_inverse(const SampleMatrix& u, const IsoTransform& t) {
  if (t.kind() != TransformKind::rosenblatt) throw InputError("rosenblatt_inverse needs a Rosenblatt transform");
  return SampleMatrix(t.inverse(u.values()), u.names());
}

double nataf_pearson(const MarginalModel& mi, const MarginalModel& mj, double rho0) {
  if (!(rho0 >= -1.0 && rho0 <= 1.0)) throw InputError("nataf_pearson: rho0 outside [-1,1]");
  return pearson_at(prepare(mi, mj), mj, rho0);
}

Eigen::MatrixXd fictive_correlation(const std::vector<MarginalModel>& marginals, const Eigen::MatrixXd& target_pearson) {
  const auto d = static_cast<Index>(marginals.size());
  if (target_pearson.rows() != d) throw InputError("fictive_correlation: target size does not match marginals");
  validate_correlation(target_pearson, "target Pearson correlation");
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(d, d);
  constexpr double edge = 1.0 - 1e-9;
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      const double target = target_pearson(i, j);
      const auto& a = marginals[static_cast<std::size_t>(i)];
      const auto& b = marginals[static_cast<std::size_t>(j)];
      double rho0 = 0.0;
      if (target == 0.0) {
        rho0 = 0.0;
      } else if (gaussian_family(a) && gaussian_family(b)) {
        rho0 = closed_form_fictive(a, b, target);
        if (!(rho0 > -1.0 && rho0 < 1.0))
          throw InputError("fictive_correlation: target " + std::to_string(target) + " infeasible for inputs " +
                           std::to_string(i + 1) + "," + std::to_string(j + 1));
      } else {
        const PearsonQuadrature q = prepare(a, b);
        double lo = -edge, hi = edge;
        const double flo = pearson_at(q, b, lo) - target;
        const double fhi = pearson_at(q, b, hi) - target;
        if (flo > 0 || fhi < 0)
          throw InputError("fictive_correlation: target " + std::to_string(target) + " infeasible for inputs " +
                           std::to_string(i + 1) + "," + std::to_string(j + 1) + " (no root in (-1,1))");
        while (hi - lo > 1e-7) {
          const double mid = 0.5 * (lo + hi);
          (pearson_at(q, b, mid) - target < 0 ? lo : hi) = mid;
        }
        rho0 = 0.5 * (lo + hi);
      }
      out(i, j) = out(j, i) = rho0;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-10) throw NumericalError("fictive correlation matrix is not positive definite");
  return out;
}

}  // namespace pcegsa
