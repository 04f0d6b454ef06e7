#include "pcegsa/dependence.hpp"
#include "pcegsa/sampling.hpp"
#include "pcegsa/transforms.hpp"

#include <doctest.h>

#include <cmath>

using namespace pcegsa;

namespace {

std::vector<MarginalModel> mixed_marginals() {
  return {MarginalModel::normal(1.0, 0.5), MarginalModel::lognormal(0.0, 0.4), MarginalModel::uniform(-1.0, 2.0),
          MarginalModel::beta(2.0, 3.0, 0.0, 4.0)};
}

}  // namespace

TEST_CASE("Gauss-Hermite rule integrates normal moments") {
  const auto q = gauss_hermite(8);
  CHECK(q.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(q.weights.dot(q.nodes)) < 1e-14);
  CHECK(q.weights.dot(q.nodes.array().pow(2).matrix()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.weights.dot(q.nodes.array().pow(4).matrix()) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(q.weights.dot(q.nodes.array().pow(6).matrix()) == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("Nataf on Gaussian marginals is whitening") {
  const Eigen::MatrixXd r = equicorrelation(3, 0.4);
  const std::vector<MarginalModel> marg{MarginalModel::normal(1.0, 2.0), MarginalModel::normal(-1.0, 0.5),
                                        MarginalModel::normal(0.0, 1.0)};
  const IsoTransform t(TransformKind::nataf, marg, DependenceModel::from_pearson(marg, r));
  Eigen::MatrixXd z(2, 3);
  z << 2.0, -1.5, 0.3, -0.7, 0.2, 1.1;
  const Eigen::MatrixXd u = t.forward(z).values;
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(r).matrixL();
  for (Index i = 0; i < 2; ++i) {
    Eigen::Vector3d s;
    for (Index j = 0; j < 3; ++j) s[j] = (z(i, j) - marg[static_cast<std::size_t>(j)].mean()) /
                                         std::sqrt(marg[static_cast<std::size_t>(j)].variance());
    const Eigen::Vector3d expect = l.triangularView<Eigen::Lower>().solve(s);
    CHECK((u.row(i).transpose() - expect).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("Nataf and Rosenblatt round-trip and decorrelate") {
  const auto marg = mixed_marginals();
  const DependenceModel dep = DependenceModel::from_copula(ar1_correlation(4, 0.6));
  const SampleMatrix z = sample_correlated(marg, dep, 20000, 5);
  for (auto kind : {TransformKind::nataf, TransformKind::rosenblatt}) {
    const std::vector<int> order = kind == TransformKind::rosenblatt ? std::vector<int>{2, 0, 3, 1} : std::vector<int>{};
    const IsoTransform t(kind, marg, dep, order);
    const TransformResult u = t.forward(z.values());
    CHECK(u.clipped == 0);
    const Eigen::MatrixXd back = t.inverse(u.values);
    CHECK((back - z.values()).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::MatrixXd c = correlation_matrix(u.values);
    CHECK((c - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.03);
    for (Index j = 0; j < 4; ++j) {
      const auto mv = mean_variance(u.values.col(j));
      CHECK(std::abs(mv.mean) < 0.03);
      CHECK(mv.variance == doctest::Approx(1.0).epsilon(0.03));
    }
  }
}

TEST_CASE("Rosenblatt in natural order equals Nataf under an exact Gaussian copula") {
  const auto marg = mixed_marginals();
  const DependenceModel dep = DependenceModel::from_copula(equicorrelation(4, 0.3));
  const SampleMatrix z = sample_correlated(marg, dep, 500, 8);
  const IsoTransform nt(TransformKind::nataf, marg, dep), rt(TransformKind::rosenblatt, marg, dep);
  CHECK((nt.forward(z.values()).values - rt.forward(z.values()).values).cwiseAbs().maxCoeff() < 1e-12);
  const std::vector<int> swapped{1, 0, 2, 3}, repeated{1, 1, 2, 3};
  CHECK_THROWS_AS(IsoTransform(TransformKind::nataf, marg, dep, swapped), InputError);
  CHECK_THROWS_AS(IsoTransform(TransformKind::rosenblatt, marg, dep, repeated), InputError);
}

TEST_CASE("fictive correlation for two uniforms") {
  const std::vector<MarginalModel> marg(2, MarginalModel::uniform(0.0, 1.0));
  const Eigen::MatrixXd f = fictive_correlation(marg, equicorrelation(2, 0.5));
  CHECK(f(0, 1) == doctest::Approx(2.0 * std::sin(M_PI * 0.5 / 6.0)).epsilon(1e-3));
  CHECK(nataf_pearson(marg[0], marg[1], f(0, 1)) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("fictive correlation matches lognormal closed forms") {
  const auto a = MarginalModel::lognormal(0.0, 0.5), b = MarginalModel::lognormal(1.0, 0.8);
  const auto n = MarginalModel::normal(0.0, 1.0);
  const double rho0 = 0.6;
  const double ll = std::expm1(rho0 * 0.4) / std::sqrt(std::expm1(0.25) * std::expm1(0.64));
  const double nl = rho0 * 0.5 / std::sqrt(std::expm1(0.25));
  CHECK(nataf_pearson(a, b, rho0) == doctest::Approx(ll).epsilon(1e-6));
  CHECK(nataf_pearson(n, a, rho0) == doctest::Approx(nl).epsilon(1e-6));

  Eigen::MatrixXd target = Eigen::MatrixXd::Identity(3, 3);
  target(0, 1) = target(1, 0) = ll;
  target(0, 2) = target(2, 0) = nl;
  const Eigen::MatrixXd f = fictive_correlation({a, b, n}, target);
  CHECK(f(0, 1) == doctest::Approx(rho0).epsilon(1e-6));
  CHECK(f(0, 2) == doctest::Approx(rho0).epsilon(1e-6));
  CHECK(f(1, 2) == 0.0);
}

TEST_CASE("infeasible Pearson targets are rejected") {
  const auto a = MarginalModel::lognormal(0.0, 1.5);
  CHECK_THROWS_AS((fictive_correlation({a, a}, equicorrelation(2, -0.9))), InputError);
}

TEST_CASE("out-of-support inputs are clipped and counted") {
  const std::vector<MarginalModel> marg{MarginalModel::uniform(0.0, 1.0), MarginalModel::normal(0.0, 1.0)};
  const IsoTransform t(TransformKind::nataf, marg, DependenceModel::independent(2));
  Eigen::MatrixXd z(2, 2);
  z << 1.5, 0.0, 0.5, 0.0;
  const TransformResult u = t.forward(z);
  CHECK(u.clipped == 1);
  CHECK(std::isfinite(u.values(0, 0)));
}
