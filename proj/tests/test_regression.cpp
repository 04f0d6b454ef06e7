#include "pcegsa/lar.hpp"
#include "pcegsa/model_io.hpp"
#include "pcegsa/regression.hpp"
#include "pcegsa/rng.hpp"
#include "pcegsa/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>

using namespace pcegsa;

namespace {

Eigen::MatrixXd gaussian_matrix(Index m, Index n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Eigen::MatrixXd x(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) x(i, j) = rng.normal(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
  return x;
}

// Leave-one-out by explicit refits, then the same correction factor.
double brute_force_cloo(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<Index>& active) {
  const Index m = x.rows(), p = static_cast<Index>(active.size()) + 1;
  Eigen::MatrixXd psi(m, p);
  psi.col(0).setOnes();
  for (Index k = 1; k < p; ++k) psi.col(k) = x.col(active[static_cast<std::size_t>(k - 1)]);
  double sse = 0.0;
  for (Index i = 0; i < m; ++i) {
    Eigen::MatrixXd a(m - 1, p);
    Eigen::VectorXd b(m - 1);
    for (Index r = 0, q = 0; r < m; ++r) {
      if (r == i) continue;
      a.row(q) = psi.row(r);
      b[q++] = y[r];
    }
    const Eigen::VectorXd c = (a.transpose() * a).ldlt().solve(a.transpose() * b);
    const double e = y[i] - psi.row(i).dot(c);
    sse += e * e;
  }
  const double mean = y.mean();
  const double var = (y.array() - mean).square().sum() / static_cast<double>(m - 1);
  const double tr = (psi.transpose() * psi).inverse().trace();
  const double t = static_cast<double>(m) / static_cast<double>(m - p) * (1.0 + tr);
  return t * (sse / static_cast<double>(m)) / var;
}

}  // namespace

TEST_CASE("LAR recovers a single feature first") {
  const Eigen::MatrixXd x = gaussian_matrix(40, 10, 11);
  const Eigen::VectorXd y = 3.0 * x.col(7);
  const LarPath path = lar_path(x, y);
  REQUIRE(path.steps() >= 1);
  CHECK(path.entry_order.front() == 7);
}

TEST_CASE("LAR on an orthogonal design enters columns by correlation") {
  Eigen::MatrixXd raw = gaussian_matrix(30, 4, 5);
  raw = raw.rowwise() - raw.colwise().mean();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() * Eigen::MatrixXd::Identity(30, 4);
  const Eigen::VectorXd y = 2.0 * q.col(1) + 1.0 * q.col(2);
  const LarPath path = lar_path(q, y);
  REQUIRE(path.steps() >= 2);
  CHECK(path.entry_order[0] == 1);
  CHECK(path.entry_order[1] == 2);
}

TEST_CASE("LAR on a zero response is empty") {
  const Eigen::MatrixXd x = gaussian_matrix(20, 5, 3);
  CHECK(lar_path(x, Eigen::VectorXd::Zero(20)).steps() == 0);
}

TEST_CASE("LAR order is invariant to positive response scaling") {
  const Eigen::MatrixXd x = gaussian_matrix(50, 12, 8);
  const Eigen::VectorXd y = x.col(2) - 0.5 * x.col(9) + 0.25 * x.col(4) + 0.1 * gaussian_matrix(50, 1, 9).col(0);
  CHECK(lar_path(x, y).entry_order == lar_path(x, 7.5 * y).entry_order);
}

TEST_CASE("LAR path stops at M-1 members") {
  const Eigen::MatrixXd x = gaussian_matrix(8, 20, 21);
  const Eigen::VectorXd y = gaussian_matrix(8, 1, 22).col(0);
  CHECK(lar_path(x, y).steps() <= 7);
}

TEST_CASE("corrected LOO: exact fit, pure noise and saturation") {
  const Eigen::MatrixXd x = gaussian_matrix(50, 3, 1);
  const Eigen::VectorXd y = (2.0 + 4.0 * x.col(1).array()).matrix();
  CHECK(corrected_loo_error(x, y, {1}) < 1e-20);

  const Eigen::MatrixXd noise = gaussian_matrix(400, 1, 2);
  const double e = corrected_loo_error(noise, noise.col(0), {});
  CHECK(e == doctest::Approx(1.0).epsilon(0.02));

  const Eigen::MatrixXd sq = gaussian_matrix(5, 5, 4);
  CHECK_THROWS_AS((corrected_loo_error(sq, sq.col(0), {0, 1, 2, 3, 4})), InputError);
}

TEST_CASE("corrected LOO matches explicit refits") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Index m = 12 + static_cast<Index>(seed) * 3;
    const Eigen::MatrixXd x = gaussian_matrix(m, 6, 100 + seed);
    const Eigen::VectorXd y = x.col(0).array().sin().matrix() + 0.3 * x.col(3) + gaussian_matrix(m, 1, 200 + seed).col(0);
    const std::vector<Index> active{0, 3, 5};
    const double fast = corrected_loo_error(x, y, active);
    const double slow = brute_force_cloo(x, y, active);
    CHECK(std::abs(fast - slow) <= 1e-10 * std::max(1.0, slow));

    LooTracker t(y);
    for (Index j : active) REQUIRE(t.add_column(x.col(j)));
    CHECK(std::abs(t.error() - slow) <= 1e-10 * std::max(1.0, slow));
  }
}

TEST_CASE("LooTracker rejects a dependent column") {
  const Eigen::MatrixXd x = gaussian_matrix(20, 2, 7);
  LooTracker t(x.col(1));
  REQUIRE(t.add_column(x.col(0)));
  CHECK_FALSE(t.add_column(3.0 * x.col(0)));
  CHECK_FALSE(t.add_column(Eigen::VectorXd::Constant(20, 2.0)));
  CHECK(t.terms() == 2);
}

namespace {

struct SparseFixture {
  std::vector<MarginalModel> marginals;
  DependenceModel dep = DependenceModel::independent(6);
  SampleMatrix z;
  Eigen::VectorXd y;
  BasisSet truth;
  Eigen::VectorXd coef;
};

SparseFixture sparse_fixture() {
  SparseFixture f;
  for (int j = 0; j < 6; ++j)
    f.marginals.push_back(j % 2 ? MarginalModel::uniform(-1.0, 2.0) : MarginalModel::normal(1.0, 0.5));
  f.z = sample_correlated(f.marginals, f.dep, 60, 42);
  std::vector<UnivariateBasis> uni = strategy_univariate_bases(Strategy::correlate, f.marginals, 2);
  f.truth = BasisSet(uni, {MultiIndex({0, 0, 0, 0, 0, 0}), MultiIndex({1, 0, 0, 0, 0, 0}),
                           MultiIndex({0, 0, 2, 0, 0, 0}), MultiIndex({0, 1, 0, 0, 1, 0}),
                           MultiIndex({0, 0, 0, 1, 0, 0})});
  f.coef.resize(5);
  f.coef << 3.0, 1.5, -0.8, 0.6, 2.0;
  f.y = evaluate_basis(f.truth, f.z.values()) * f.coef;
  return f;
}

}  // namespace

TEST_CASE("fit_pce recovers a sparse degree-2 expansion") {
  const SparseFixture f = sparse_fixture();
  const PceModel m = fit_pce(f.z, f.y, Strategy::correlate, f.marginals, f.dep);
  CHECK(m.info().p_selected == 2);
  REQUIRE(m.basis().size() == f.truth.size());
  for (Index l = 0; l < f.truth.size(); ++l) {
    const auto& k = f.truth.indices()[static_cast<std::size_t>(l)];
    const auto it = std::find(m.basis().indices().begin(), m.basis().indices().end(), k);
    REQUIRE(it != m.basis().indices().end());
    const Index pos = it - m.basis().indices().begin();
    CHECK(std::abs(m.coefficients()[pos] - f.coef[l]) < 1e-8);
  }
}

TEST_CASE("fit_pce is deterministic") {
  const SparseFixture f = sparse_fixture();
  const PceModel a = fit_pce(f.z, f.y, Strategy::correlate, f.marginals, f.dep);
  const PceModel b = fit_pce(f.z, f.y, Strategy::correlate, f.marginals, f.dep);
  CHECK(model_to_json(a).dump() == model_to_json(b).dump());
}

TEST_CASE("fit_pce on a constant response keeps only the mean") {
  const SparseFixture f = sparse_fixture();
  const PceModel m = fit_pce(f.z, Eigen::VectorXd::Constant(60, 4.5), Strategy::correlate, f.marginals, f.dep);
  CHECK(m.basis().size() == 1);
  CHECK(m.info().e_cloo == 0.0);
  CHECK(m.coefficients()[0] == doctest::Approx(4.5));
  const Eigen::VectorXd p = m.predict(f.z);
  CHECK((p.array() - 4.5).abs().maxCoeff() < 1e-12);
}

TEST_CASE("fit_pce rejects too few samples") {
  const SparseFixture f = sparse_fixture();
  const SampleMatrix small(f.z.values().topRows(7), f.z.names());
  CHECK_THROWS_AS(fit_pce(small, f.y.head(7), Strategy::correlate, f.marginals, f.dep), InputError);
}

TEST_CASE("Nataf fit of a linear Gaussian model: coefficients, substitution and faithful prediction") {
  const double rho = 0.5;
  std::vector<MarginalModel> marg{MarginalModel::normal(0.0, 1.0), MarginalModel::normal(0.0, 2.0)};
  const DependenceModel dep = DependenceModel::from_copula(equicorrelation(2, rho));
  const SampleMatrix z = sample_correlated(marg, dep, 60, 3);
  const Eigen::Vector2d a(1.0, 1.0);
  const Eigen::VectorXd y = z.values() * a;
  const PceModel m = fit_pce(z, y, Strategy::nataf, marg, dep);

  // Y = a^T D L U, so the degree-1 Hermite coefficients are L^T D a.
  Eigen::Matrix2d l;
  l << 1.0, 0.0, rho, std::sqrt(1.0 - rho * rho);
  const Eigen::Vector2d expected = l.transpose() * Eigen::Vector2d(1.0, 2.0).asDiagonal() * a;
  for (Index k = 0; k < m.basis().size(); ++k) {
    const auto& idx = m.basis().indices()[static_cast<std::size_t>(k)];
    if (idx.total_degree() != 1) continue;
    const int j = idx.support().front();
    CHECK(m.coefficients()[k] == doctest::Approx(expected[j]).epsilon(1e-8));
  }

  const SampleMatrix test = sample_correlated(marg, dep, 50, 4, Design::plain, 2);
  const Eigen::VectorXd subst = m.predict(test);
  const Eigen::VectorXd faithful = m.predict(test, true);
  CHECK((subst - test.values() * expected).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((faithful - test.values() * a).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("predict checks the input dimension") {
  const SparseFixture f = sparse_fixture();
  const PceModel m = fit_pce(f.z, f.y, Strategy::correlate, f.marginals, f.dep);
  CHECK_THROWS_AS(m.predict(Eigen::MatrixXd::Zero(3, 5)), InputError);
}

TEST_CASE("model JSON round-trips bit for bit") {
  const SparseFixture f = sparse_fixture();
  std::vector<MarginalModel> emp;
  for (Index j = 0; j < 6; ++j) emp.push_back(MarginalModel::empirical(f.z.values().col(j)));
  for (Strategy s : kAllStrategies) {
    const PceModel m = fit_pce(f.z, f.y, s, s == Strategy::correlate ? emp : f.marginals, f.dep);
    const PceModel back = model_from_json(nlohmann::json::parse(model_to_json(m).dump()));
    REQUIRE(back.coefficients().size() == m.coefficients().size());
    for (Index k = 0; k < m.coefficients().size(); ++k) CHECK(back.coefficients()[k] == m.coefficients()[k]);
    CHECK(back.basis().indices() == m.basis().indices());
    const Eigen::VectorXd p1 = m.predict(f.z, true), p2 = back.predict(f.z, true);
    CHECK((p1 - p2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(model_to_json(back).dump() == model_to_json(m).dump());
  }
}

TEST_CASE("strategy names parse") {
  CHECK(parse_strategy("PCE_NT") == Strategy::nataf);
  CHECK(parse_strategy("rt") == Strategy::rosenblatt);
  CHECK(parse_strategy("correlate") == Strategy::correlate);
  CHECK_THROWS_AS(parse_strategy("kriging"), InputError);
}
