#include "pcegsa/regression.hpp"

#include "pcegsa/lar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace pcegsa {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::correlate: return "PCE_correlate";
    case Strategy::nataf: return "PCE_NT";
    case Strategy::rosenblatt: return "PCE_RT";
  }
  return "?";
}

std::string short_name(Strategy s) {
  switch (s) {
    case Strategy::correlate: return "correlate";
    case Strategy::nataf: return "nataf";
    case Strategy::rosenblatt: return "rosenblatt";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  std::string n;
  for (char c : name) n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "correlate" || n == "pce_correlate") return Strategy::correlate;
  if (n == "nataf" || n == "nt" || n == "pce_nt") return Strategy::nataf;
  if (n == "rosenblatt" || n == "rt" || n == "pce_rt") return Strategy::rosenblatt;
  throw InputError("unknown strategy '" + name + "' (expected correlate, nataf or rosenblatt)");
}

TransformKind transform_kind(Strategy s) {
  switch (s) {
    case Strategy::nataf: return TransformKind::nataf;
    case Strategy::rosenblatt: return TransformKind::rosenblatt;
    default: return TransformKind::identity;
  }
}

PceModel::PceModel(Strategy strategy, std::vector<std::string> names, std::vector<MarginalModel> marginals,
                   DependenceModel dependence, BasisSet basis, Eigen::VectorXd coefficients, FitInfo info,
                   std::vector<int> ordering)
    : strategy_(strategy),
      names_(std::move(names)),
      transform_(transform_kind(strategy), std::move(marginals), std::move(dependence), std::move(ordering)),
      basis_(std::move(basis)),
      coefficients_(std::move(coefficients)),
      info_(std::move(info)) {
  if (basis_.size() != coefficients_.size()) throw InputError("model: coefficient count does not match basis size");
  if (transform_.dim() != basis_.dim()) throw InputError("model: marginal count does not match basis dimension");
  if (names_.empty()) names_ = default_names(basis_.dim());
  if (static_cast<Index>(names_.size()) != basis_.dim()) throw InputError("model: name count does not match dimension");
  if (!coefficients_.allFinite()) throw InputError("model: non-finite coefficient");
}

Eigen::MatrixXd PceModel::basis_points(const Eigen::Ref<const Eigen::MatrixXd>& z, bool faithful) const {
  if (z.cols() != dim())
    throw InputError("predict: inputs have " + std::to_string(z.cols()) + " columns, model expects " +
                     std::to_string(dim()));
  if (faithful && strategy_ != Strategy::correlate) return transform_.forward(z).values;
  return z;
}

Eigen::MatrixXd PceModel::design(const Eigen::Ref<const Eigen::MatrixXd>& z, bool faithful) const {
  return evaluate_basis(basis_, basis_points(z, faithful));
}

Eigen::VectorXd PceModel::predict(const Eigen::Ref<const Eigen::MatrixXd>& z, bool faithful) const {
  return design(z, faithful) * coefficients_;
}

std::vector<UnivariateBasis> strategy_univariate_bases(Strategy s, const std::vector<MarginalModel>& marginals, int p) {
  std::vector<UnivariateBasis> out;
  out.reserve(marginals.size());
  if (s != Strategy::correlate) {
    // Built through the same moment route; reproduces the Hermite recurrence.
    const Eigen::VectorXd m = MarginalModel::normal(0.0, 1.0).raw_moments(2 * p + 2);
    const UnivariateBasis h = build_univariate_basis(m, p);
    out.assign(marginals.size(), h);
    return out;
  }
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    const auto& mg = marginals[j];
    const int order = mg.max_moment_order();
    int deg = p;
    if (2 * deg > order) {
      deg = order / 2;
      warn("input " + std::to_string(j + 1) + ": only " + std::to_string(order) + " moments known; basis degree capped at " +
           std::to_string(deg));
    }
    out.push_back(build_univariate_basis(mg.raw_moments(std::min(order, 2 * deg + 2)), deg));
  }
  return out;
}

namespace {

struct OrderFit {
  std::vector<Index> active;  // columns of the order-p basis, 0 excluded
  double e = std::numeric_limits<double>::infinity();
};

// Scans the LAR path, keeping the earliest step whose error is meaningfully lower.
OrderFit select_on_path(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y) {
  const Index m = psi.rows();
  OrderFit best;
  LooTracker tracker(y);
  best.e = tracker.error();
  if (best.e == 0.0 || psi.cols() < 2) return best;

  const LarPath path = lar_path(psi.rightCols(psi.cols() - 1), y, m - 2);
  std::vector<Index> current;
  for (Index j : path.entry_order) {
    if (!tracker.add_column(psi.col(j + 1))) break;
    current.push_back(j + 1);
    const double e = tracker.error();
    if (!std::isfinite(e)) break;
    if (e < best.e * (1.0 - 1e-9) - 1e-15) {
      best.e = e;
      best.active = current;
    }
    if (e == 0.0) break;
  }
  return best;
}

}  // namespace

PceModel fit_pce(const SampleMatrix& inputs, const Eigen::Ref<const Eigen::VectorXd>& y, Strategy strategy,
                 const std::vector<MarginalModel>& marginals, const DependenceModel& dep, const FitOptions& options) {
  const Index m = inputs.rows(), d = inputs.cols();
  if (options.p_max < 1) throw InputError("p_max must be >= 1");
  if (m < d + 2)
    throw InputError("M_p = " + std::to_string(m) + " is too small for D = " + std::to_string(d) + " (need >= D+2)");
  if (y.size() != m) throw InputError("response length does not match the number of input rows");
  if (!y.allFinite()) throw InputError("response contains non-finite values");
  if (static_cast<Index>(marginals.size()) != d) throw InputError("marginal count does not match input columns");
  if (dep.dim() != d) throw InputError("dependence dimension does not match input columns");

  const std::vector<int> ordering =
      strategy == Strategy::rosenblatt ? options.rosenblatt_ordering : std::vector<int>{};
  const IsoTransform transform(transform_kind(strategy), marginals, dep, ordering);
  FitInfo info;
  info.m_p = m;
  Eigen::MatrixXd points;
  if (strategy == Strategy::correlate) {
    points = inputs.values();
  } else {
    TransformResult t = transform.forward(inputs.values());
    info.clipped = t.clipped;
    if (t.clipped > 0) warn(std::to_string(t.clipped) + " CDF values clipped during the " + to_string(strategy) + " transform");
    points = std::move(t.values);
  }

  const std::vector<UnivariateBasis> uni = strategy_univariate_bases(strategy, marginals, options.p_max);

  double best_e = std::numeric_limits<double>::infinity();
  int best_p = 0;
  BasisSet best_basis;
  std::vector<Index> best_active;
  double reference = std::numeric_limits<double>::infinity();
  int stale = 0;
  Index last_size = 0;

  for (int p = 1; p <= options.p_max; ++p) {
    BasisSet basis = BasisSet::total_degree(uni, p);
    if (basis.size() == last_size) break;  // every variable already at its maximum degree
    last_size = basis.size();
    const Eigen::MatrixXd psi = evaluate_basis(basis, points);
    const OrderFit fit = select_on_path(psi, y);
    info.history.push_back({p, basis.size(), static_cast<Index>(fit.active.size()), fit.e});

    if (fit.e < best_e) {
      best_e = fit.e;
      best_p = p;
      best_active = fit.active;
      best_basis = std::move(basis);
    }
    if (best_e < options.target_error) break;
    if (std::isfinite(reference) && !(fit.e < reference * (1.0 - options.min_improvement))) {
      if (++stale >= options.patience) break;
    } else {
      stale = 0;
    }
    reference = std::min(reference, fit.e);
  }
  if (!std::isfinite(best_e)) {
    std::string diag = "all PCE fits saturated (M_p = " + std::to_string(m) + "):";
    for (const auto& h : info.history)
      diag += " p=" + std::to_string(h.p) + " L=" + std::to_string(h.candidates);
    throw NumericalError(diag);
  }

  std::vector<Index> keep{0};
  keep.insert(keep.end(), best_active.begin(), best_active.end());
  std::sort(keep.begin(), keep.end());
  BasisSet retained = best_basis.subset(keep);
  const Eigen::MatrixXd psi = evaluate_basis(retained, points);
  const Eigen::VectorXd coef = psi.colPivHouseholderQr().solve(y);
  if (!coef.allFinite()) throw NumericalError("least-squares refit produced non-finite coefficients");

  info.p_selected = best_p;
  info.e_cloo = best_e;
  info.active_set_size = static_cast<Index>(best_active.size());
  return PceModel(strategy, inputs.names(), marginals, dep, std::move(retained), coef, std::move(info), ordering);
}

}  // namespace pcegsa
