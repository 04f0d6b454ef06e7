#include "pcegsa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcegsa {

AncovaReport binned_ancova(const SampleMatrix& z, const Eigen::Ref<const Eigen::VectorXd>& y, int bins,
                           const std::string& label) {
  const Index m = z.rows(), d = z.cols();
  if (bins < 1) throw InputError("bin count must be >= 1");
  if (y.size() != m) throw InputError("response length does not match the sample");
  const double g0 = mean_variance(y).mean;

  Eigen::MatrixXd g(m, d);
  std::vector<Index> order(static_cast<std::size_t>(m));
  for (Index j = 0; j < d; ++j) {
    const auto col = z.values().col(j);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return col[a] < col[b]; });
    std::vector<double> edges;
    for (int k = 1; k < bins; ++k)
      edges.push_back(col[order[static_cast<std::size_t>(static_cast<Index>(k) * m / bins)]]);

    std::vector<int> bin(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i)
      bin[static_cast<std::size_t>(i)] =
          static_cast<int>(std::upper_bound(edges.begin(), edges.end(), col[i]) - edges.begin());
    std::vector<KahanSum> sum(static_cast<std::size_t>(bins));
    std::vector<Index> count(static_cast<std::size_t>(bins), 0);
    for (Index i = 0; i < m; ++i) {
      const auto b = static_cast<std::size_t>(bin[static_cast<std::size_t>(i)]);
      sum[b].add(y[i]);
      ++count[b];
    }
    const auto empty = std::count(count.begin(), count.end(), Index{0});
    if (empty > 0)
      warn(z.names()[static_cast<std::size_t>(j)] + ": " + std::to_string(empty) +
           " empty bins merged into their neighbours");
    for (Index i = 0; i < m; ++i) {
      const auto b = static_cast<std::size_t>(bin[static_cast<std::size_t>(i)]);
      g(i, j) = sum[b].value() / static_cast<double>(count[b]) - g0;
    }
  }
  const Eigen::VectorXd rest = (y.array() - g0).matrix() - g.rowwise().sum();
  return assemble_report(label, z.names(), y, g, {covariance(y, rest)});
}

AncovaReport mc_ancova_on(const TestModel& model, const SampleMatrix& z, int bins) {
  const Eigen::VectorXd y = model.evaluate(z);
  // a deterministic single-input model is its own conditional expectation
  if (!model.has_known_hdmr() && model.dim() == 1)
    return assemble_report("MC", z.names(), y, (y.array() - mean_variance(y).mean).matrix(), {});
  if (!model.has_known_hdmr()) return binned_ancova(z, y, bins, "MC");
  const HdmrSample h = model.known_hdmr(z.values());
  std::vector<double> higher;
  for (const auto& t : h.higher) higher.push_back(covariance(y, t));
  return assemble_report("MC", z.names(), y, h.first_order, higher);
}

AncovaReport mc_ancova(const TestModel& model, Index m, std::uint64_t seed, int bins) {
  if (m < 10000) warn("mc_ancova with M = " + std::to_string(m) + " < 10^4; the reference will be noisy");
  const SampleMatrix z =
      sample_correlated(model.marginals(), model.dependence(), m, seed, Design::plain, kOracleStream, model.input_names());
  return mc_ancova_on(model, z, bins);
}

SubstitutionError transform_substitution_error(const Eigen::VectorXd& a, const Eigen::MatrixXd& sigma) {
  const Index d = a.size();
  if (sigma.rows() != d || sigma.cols() != d) throw InputError("covariance size does not match coefficients");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff()))
    throw InputError("covariance matrix is not symmetric");
  if ((sigma.diagonal().array() <= 0).any()) throw InputError("covariance matrix is not positive definite");
  const Eigen::VectorXd sd = sigma.diagonal().array().sqrt();
  const Eigen::MatrixXd r = sd.cwiseInverse().asDiagonal() * sigma * sd.cwiseInverse().asDiagonal();
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() != Eigen::Success) throw InputError("covariance matrix is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();

  SubstitutionError out;
  out.substituted_coefficients = l.transpose() * (sd.asDiagonal() * a);
  out.exact = linear_ancova_indices(a, sigma);
  out.substituted = linear_ancova_indices(out.substituted_coefficients, sigma);
  for (std::size_t j = 0; j < out.exact.size(); ++j) {
    const auto& e = out.exact[j];
    const auto& s = out.substituted[j];
    out.delta.push_back({e.input, s.s - e.s, s.s_u - e.s_u, s.s_c - e.s_c});
  }
  return out;
}

double ks_statistic(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() == 0 || y.size() == 0) throw InputError("KS statistic needs non-empty samples");
  std::vector<double> a(x.data(), x.data() + x.size()), b(y.data(), y.data() + y.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, k = 0;
  double dmax = 0.0;
  while (i < a.size() && k < b.size()) {
    const double v = std::min(a[i], b[k]);
    while (i < a.size() && a[i] == v) ++i;
    while (k < b.size() && b[k] == v) ++k;
    dmax = std::max(dmax, std::abs(static_cast<double>(i) / na - static_cast<double>(k) / nb));
  }
  return dmax;
}

double max_index_error(const std::vector<AncovaIndex>& estimate, const std::vector<AncovaIndex>& reference) {
  if (estimate.size() != reference.size()) throw InputError("index sets have different sizes");
  double e = 0.0;
  for (std::size_t j = 0; j < estimate.size(); ++j) {
    e = std::max(e, std::abs(estimate[j].s - reference[j].s));
    e = std::max(e, std::abs(estimate[j].s_u - reference[j].s_u));
    e = std::max(e, std::abs(estimate[j].s_c - reference[j].s_c));
  }
  return e;
}

}  // namespace pcegsa
