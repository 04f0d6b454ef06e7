#include "pcegsa/ancova.hpp"

#include "pcegsa/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

namespace pcegsa {

std::vector<HdmrTerm> extract_hdmr(const PceModel& model) {
  const auto& idx = model.basis().indices();
  std::map<std::vector<int>, std::vector<Index>> groups;
  for (std::size_t l = 0; l < idx.size(); ++l)
    if (!idx[l].is_zero()) groups[idx[l].support()].push_back(static_cast<Index>(l));

  std::vector<HdmrTerm> terms;
  terms.reserve(groups.size());
  for (auto& [subset, positions] : groups) {
    HdmrTerm t;
    t.subset = subset;
    t.positions = positions;
    t.coefficients.resize(static_cast<Index>(positions.size()));
    for (std::size_t i = 0; i < positions.size(); ++i)
      t.coefficients[static_cast<Index>(i)] = model.coefficients()[positions[i]];
    terms.push_back(std::move(t));
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const HdmrTerm& a, const HdmrTerm& b) { return a.subset.size() < b.subset.size(); });
  return terms;
}

std::vector<int> rank_inputs(const std::vector<AncovaIndex>& indices) {
  std::vector<int> order(indices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& x = indices[static_cast<std::size_t>(a)];
    const auto& y = indices[static_cast<std::size_t>(b)];
    if (x.s != y.s) return x.s > y.s;
    if (x.s_u != y.s_u) return x.s_u > y.s_u;
    return a < b;
  });
  return order;
}

AncovaReport assemble_report(std::string strategy, const std::vector<std::string>& names,
                             const Eigen::Ref<const Eigen::VectorXd>& y,
                             const Eigen::Ref<const Eigen::MatrixXd>& first_order,
                             const std::vector<double>& higher_order_cov) {
  const Index m = y.size(), d = first_order.cols();
  if (m < 2) throw InputError("ANCOVA needs M_L >= 2 evaluation samples");
  if (first_order.rows() != m) throw InputError("component rows do not match the response length");
  if (static_cast<Index>(names.size()) != d) throw InputError("input names do not match component count");

  AncovaReport r;
  r.strategy = std::move(strategy);
  r.m_l = m;
  const Moments2 mv = mean_variance(y);
  r.mean = mv.mean;
  r.variance = mv.variance;
  if (!(mv.variance >= 1e-14))
    throw NumericalError("degenerate response: sample variance " + format_double(mv.variance) + " < 1e-14");

  KahanSum total;
  for (Index j = 0; j < d; ++j) {
    AncovaIndex a;
    a.input = names[static_cast<std::size_t>(j)];
    const double cov = covariance(y, first_order.col(j));
    a.s = cov / mv.variance;
    a.s_u = mean_variance(first_order.col(j)).variance / mv.variance;
    a.s_c = a.s - a.s_u;
    total.add(cov);
    r.indices.push_back(std::move(a));
  }
  KahanSum inter;
  for (double c : higher_order_cov) {
    inter.add(c);
    total.add(c);
  }
  r.interaction_share = inter.value() / mv.variance;
  r.sum_check = total.value() / mv.variance;
  r.ranking = rank_inputs(r.indices);
  return r;
}

AncovaReport ancova_indices(const PceModel& model, const SampleMatrix& inputs, bool faithful) {
  const Index m = inputs.rows(), d = model.dim();
  if (inputs.cols() != d)
    throw InputError("evaluation sample has " + std::to_string(inputs.cols()) + " columns, model expects " +
                     std::to_string(d));
  if (m < 1000) warn("M_L = " + std::to_string(m) + " is below 1000; index estimates will be noisy");

  const bool cut = faithful && model.strategy() != Strategy::correlate;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, d);
  std::vector<double> higher;
  Eigen::VectorXd y;

  if (!cut) {
    const Eigen::MatrixXd psi = model.design(inputs.values());
    y = psi * model.coefficients();
    for (const auto& t : extract_hdmr(model)) {
      Eigen::VectorXd gb = Eigen::VectorXd::Zero(m);
      for (std::size_t i = 0; i < t.positions.size(); ++i)
        gb.noalias() += t.coefficients[static_cast<Index>(i)] * psi.col(t.positions[i]);
      if (t.subset.size() == 1)
        g.col(t.subset.front()) = gb;
      else
        higher.push_back(covariance(y, gb));
    }
  } else {
    y = model.predict(inputs.values(), true);
    Eigen::RowVectorXd anchor(d);
    for (Index j = 0; j < d; ++j) anchor[j] = model.marginals()[static_cast<std::size_t>(j)].mean();
    const double f0 = model.predict(Eigen::MatrixXd(anchor), true)[0];
    Eigen::MatrixXd slice(m, d);
    for (Index j = 0; j < d; ++j) {
      slice.rowwise() = anchor;
      slice.col(j) = inputs.values().col(j);
      g.col(j) = model.predict(slice, true).array() - f0;
    }
    const Eigen::VectorXd rest = (y.array() - f0).matrix() - g.rowwise().sum();
    higher.push_back(covariance(y, rest));
  }
  AncovaReport r = assemble_report(to_string(model.strategy()), model.names(), y, g, higher);
  r.faithful = cut;
  return r;
}

SobolIndices sobol_indices(const PceModel& model) {
  if (model.strategy() == Strategy::correlate && !model.dependence().is_independent())
    warn("Sobol indices of a correlate model on dependent inputs have no variance-decomposition meaning");
  const Index d = model.dim();
  SobolIndices out{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d)};
  const auto& idx = model.basis().indices();
  double var = 0.0;
  for (std::size_t l = 0; l < idx.size(); ++l) {
    if (idx[l].is_zero()) continue;
    const double c2 = model.coefficients()[static_cast<Index>(l)] * model.coefficients()[static_cast<Index>(l)];
    var += c2;
    const auto sup = idx[l].support();
    if (sup.size() == 1) out.first[sup.front()] += c2;
    for (int j : sup) out.total[j] += c2;
  }
  if (var > 0) {
    out.first /= var;
    out.total /= var;
  }
  return out;
}

SmoothingResult smooth_and_requantify(const ResponseFn& response, const std::vector<MarginalModel>& marginals,
                                      const SampleMatrix& inputs, const std::vector<int>& set) {
  if (set.empty()) throw InputError("smoothing set is empty");
  const Index d = inputs.cols();
  if (static_cast<Index>(marginals.size()) != d) throw InputError("marginal count does not match input columns");
  SmoothingResult r;
  r.set = set;
  std::sort(r.set.begin(), r.set.end());
  r.set.erase(std::unique(r.set.begin(), r.set.end()), r.set.end());
  for (int j : r.set) {
    if (j < 0 || j >= d) throw InputError("smoothing index " + std::to_string(j) + " out of range");
    r.names.push_back(inputs.names()[static_cast<std::size_t>(j)]);
  }

  const Eigen::VectorXd before = response(inputs.values());
  Eigen::MatrixXd smoothed = inputs.values();
  for (int j : r.set) smoothed.col(j).setConstant(marginals[static_cast<std::size_t>(j)].mean());
  r.all_smoothed = static_cast<Index>(r.set.size()) == d;
  if (r.all_smoothed) warn("every input smoothed: the response is deterministic");
  const Eigen::VectorXd after = response(smoothed);

  r.sigma_before = std::sqrt(mean_variance(before).variance);
  r.sigma_after = r.all_smoothed ? 0.0 : std::sqrt(mean_variance(after).variance);
  if (!(r.sigma_before > 0)) throw NumericalError("response has zero variance before smoothing");
  r.delta_sigma = (r.sigma_after - r.sigma_before) / r.sigma_before;
  return r;
}

void attach_reference(SmoothingResult& result, const SmoothingResult& reference) {
  result.reference_sigma_after = reference.sigma_after;
  if (reference.sigma_after > 0)
    result.delta_sigma_rr = (result.sigma_after - reference.sigma_after) / reference.sigma_after;
  else
    result.delta_sigma_rr.reset();
}

std::vector<int> resolve_inputs(const std::vector<std::string>& names, const std::vector<std::string>& requested) {
  std::vector<int> out;
  for (const auto& q : requested) {
    auto it = std::find(names.begin(), names.end(), q);
    if (it != names.end()) {
      out.push_back(static_cast<int>(it - names.begin()));
      continue;
    }
    int pos = 0;
    const auto [ptr, ec] = std::from_chars(q.data(), q.data() + q.size(), pos);
    if (ec == std::errc() && ptr == q.data() + q.size() && pos >= 1 && pos <= static_cast<int>(names.size())) {
      out.push_back(pos - 1);
      continue;
    }
    throw InputError("unknown input '" + q + "'");
  }
  return out;
}

}  // namespace pcegsa
