#include "pcegsa/bench_models.hpp"

#include "pcegsa/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace pcegsa {

TestModel::TestModel(std::string name, std::vector<MarginalModel> marginals, DependenceModel dep, Eval eval,
                     Hdmr hdmr, std::vector<AncovaIndex> known_indices)
    : name_(std::move(name)),
      names_(default_names(static_cast<Index>(marginals.size()))),
      marginals_(std::move(marginals)),
      dep_(std::move(dep)),
      eval_(std::move(eval)),
      hdmr_(std::move(hdmr)),
      known_(std::move(known_indices)) {
  if (dep_.dim() != dim()) throw InputError("benchmark: dependence dimension does not match marginals");
}

Eigen::VectorXd TestModel::evaluate(const Eigen::Ref<const Eigen::MatrixXd>& z) const {
  if (z.cols() != dim())
    throw InputError(name_ + " expects " + std::to_string(dim()) + " inputs, got " + std::to_string(z.cols()));
  Eigen::VectorXd y(z.rows());
  parallel_for(static_cast<std::size_t>(z.rows()), [&](std::size_t begin, std::size_t end) {
    std::vector<double> row(static_cast<std::size_t>(dim()));
    for (std::size_t i = begin; i < end; ++i) {
      for (Index j = 0; j < dim(); ++j) row[static_cast<std::size_t>(j)] = z(static_cast<Index>(i), j);
      y[static_cast<Index>(i)] = eval_(row.data());
    }
  });
  return y;
}

HdmrSample TestModel::known_hdmr(const Eigen::MatrixXd& z) const {
  if (!hdmr_) throw InputError(name_ + " has no closed-form HDMR");
  if (z.cols() != dim()) throw InputError(name_ + ": wrong input dimension");
  return hdmr_(z);
}

std::vector<AncovaIndex> linear_ancova_indices(const Eigen::VectorXd& a, const Eigen::MatrixXd& cov) {
  if (cov.rows() != a.size() || cov.cols() != a.size()) throw InputError("coefficient/covariance size mismatch");
  const Eigen::VectorXd ca = cov * a;
  const double var = a.dot(ca);
  if (!(var > 0)) throw InputError("linear model has zero variance");
  std::vector<AncovaIndex> out;
  const auto names = default_names(a.size());
  for (Index j = 0; j < a.size(); ++j) {
    AncovaIndex x;
    x.input = names[static_cast<std::size_t>(j)];
    x.s = a[j] * ca[j] / var;
    x.s_u = a[j] * a[j] * cov(j, j) / var;
    x.s_c = x.s - x.s_u;
    out.push_back(x);
  }
  return out;
}

TestModel linear_gaussian(const Eigen::VectorXd& a, double rho, const Eigen::VectorXd& sigma) {
  const Index d = a.size();
  if (d < 1 || sigma.size() != d) throw InputError("linear_gaussian: coefficient and sigma sizes differ");
  std::vector<MarginalModel> marg;
  for (Index j = 0; j < d; ++j) marg.push_back(MarginalModel::normal(0.0, sigma[j]));
  const Eigen::MatrixXd r = equicorrelation(d, rho);
  const Eigen::MatrixXd cov = sigma.asDiagonal() * r * sigma.asDiagonal();
  auto eval = [a](const double* z) {
    double s = 0.0;
    for (Index j = 0; j < a.size(); ++j) s += a[j] * z[j];
    return s;
  };
  auto hdmr = [a](const Eigen::MatrixXd& z) {
    HdmrSample h;
    h.first_order = z * a.asDiagonal();
    return h;
  };
  return TestModel("linear_gaussian", std::move(marg), DependenceModel::from_copula(r), eval, hdmr,
                   linear_ancova_indices(a, cov));
}

TestModel quadratic_copula(double rho) {
  std::vector<MarginalModel> marg{MarginalModel::normal(0.0, 1.0), MarginalModel::lognormal(0.0, 0.5),
                                  MarginalModel::uniform(-1.0, 1.0)};
  const double m22 = marg[1].raw_moment(2);
  auto eval = [](const double* z) { return z[0] + 2.0 * z[1] * z[1] + 1.5 * z[2] + 0.8 * z[0] * z[2]; };
  // Components centred under the marginals (Z1 and Z3 have zero mean).
  auto hdmr = [m22](const Eigen::MatrixXd& z) {
    HdmrSample h;
    h.first_order.resize(z.rows(), 3);
    h.first_order.col(0) = z.col(0);
    h.first_order.col(1) = 2.0 * (z.col(1).array().square() - m22);
    h.first_order.col(2) = 1.5 * z.col(2);
    h.higher.push_back(0.8 * z.col(0).cwiseProduct(z.col(2)));
    return h;
  };
  return TestModel("quadratic_copula", std::move(marg), DependenceModel::from_copula(equicorrelation(3, rho)), eval,
                   hdmr);
}

TestModel ishigami_copula(double rho) {
  constexpr double pi = std::numbers::pi;
  static constexpr double a = 7.0, b = 0.1;
  const double z4 = std::pow(pi, 4) / 5.0;
  std::vector<MarginalModel> marg(3, MarginalModel::uniform(-pi, pi));
  auto eval = [](const double* z) {
    const double s = std::sin(z[0]);
    return s + a * std::sin(z[1]) * std::sin(z[1]) + b * std::pow(z[2], 4) * s;
  };
  auto hdmr = [z4](const Eigen::MatrixXd& z) {
    HdmrSample h;
    h.first_order = Eigen::MatrixXd::Zero(z.rows(), 3);
    const Eigen::ArrayXd s1 = z.col(0).array().sin();
    h.first_order.col(0) = (s1 * (1.0 + b * z4)).matrix();
    h.first_order.col(1) = (a * (z.col(1).array().sin().square() - 0.5)).matrix();
    h.higher.push_back((b * s1 * (z.col(2).array().pow(4) - z4)).matrix());
    return h;
  };
  std::vector<AncovaIndex> known;
  if (rho == 0.0) {
    // Classical independent-input values.
    const double v1 = 0.5 * (1.0 + b * z4) * (1.0 + b * z4);
    const double v2 = a * a / 8.0;
    const double v13 = b * b * std::pow(pi, 8) * (1.0 / 18.0 - 1.0 / 50.0);
    const double var = v1 + v2 + v13;
    const auto names = default_names(3);
    for (int j = 0; j < 3; ++j) {
      const double s = (j == 0 ? v1 : j == 1 ? v2 : 0.0) / var;
      known.push_back({names[static_cast<std::size_t>(j)], s, s, 0.0});
    }
  }
  return TestModel("ishigami_copula", std::move(marg), DependenceModel::from_copula(equicorrelation(3, rho)), eval,
                   hdmr, std::move(known));
}

DcNetwork::DcNetwork(int buses, std::vector<Line> lines, int slack)
    : buses_(buses), slack_(slack), lines_(std::move(lines)) {
  if (buses < 2) throw InputError("DC network needs at least two buses");
  if (slack < 0 || slack >= buses) throw InputError("slack bus out of range");
  if (lines_.empty()) throw InputError("DC network has no lines");
  Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(buses, buses);
  std::vector<int> parent(static_cast<std::size_t>(buses));
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  };
  for (const auto& l : lines_) {
    if (l.from < 0 || l.from >= buses || l.to < 0 || l.to >= buses || l.from == l.to)
      throw InputError("DC line has invalid endpoints");
    if (!(l.x > 0) || !(l.limit > 0)) throw InputError("DC line reactance and limit must be positive");
    const double y = 1.0 / l.x;
    bmat(l.from, l.from) += y;
    bmat(l.to, l.to) += y;
    bmat(l.from, l.to) -= y;
    bmat(l.to, l.from) -= y;
    parent[static_cast<std::size_t>(root(l.from))] = root(l.to);
  }
  for (int v = 0; v < buses; ++v)
    if (root(v) != root(slack)) throw InputError("DC network is disconnected (bus " + std::to_string(v + 1) + ")");

  std::vector<int> keep;
  for (int v = 0; v < buses; ++v)
    if (v != slack) keep.push_back(v);
  const Index n = static_cast<Index>(keep.size());
  Eigen::MatrixXd br(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) br(i, k) = bmat(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXd xr = br.llt().solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(buses, buses);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) x(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(k)]) = xr(i, k);

  ptdf_.resize(static_cast<Index>(lines_.size()), buses);
  for (std::size_t l = 0; l < lines_.size(); ++l)
    ptdf_.row(static_cast<Index>(l)) = (x.row(lines_[l].from) - x.row(lines_[l].to)) / lines_[l].x;
}

Eigen::VectorXd DcNetwork::flows(const Eigen::Ref<const Eigen::VectorXd>& injections) const {
  if (injections.size() != buses_) throw InputError("injection vector has the wrong length");
  return ptdf_ * injections;
}

double DcNetwork::transfer_capability(const Eigen::Ref<const Eigen::VectorXd>& injections, int source, int sink) const {
  if (source < 0 || source >= buses_ || sink < 0 || sink >= buses_ || source == sink)
    throw InputError("invalid transfer buses");
  const Eigen::VectorXd f = flows(injections);
  const Eigen::VectorXd df = ptdf_.col(source) - ptdf_.col(sink);
  double ttc = std::numeric_limits<double>::infinity();
  for (Index l = 0; l < df.size(); ++l) {
    const double lim = lines_[static_cast<std::size_t>(l)].limit;
    if (std::abs(df[l]) < 1e-12) continue;
    const double room = df[l] > 0 ? lim - f[l] : lim + f[l];
    ttc = std::min(ttc, room / std::abs(df[l]));
  }
  return ttc;
}

DcNetwork dc_toy_network() {
  return DcNetwork(5, {{0, 1, 0.10, 1.0}, {0, 2, 0.10, 1.0}, {1, 2, 0.15, 0.6},
                       {1, 3, 0.10, 1.0}, {2, 4, 0.10, 0.9}, {3, 4, 0.12, 0.8}});
}

TestModel dc_ttc_toy(double rho) {
  const DcNetwork net = dc_toy_network();
  std::vector<MarginalModel> marg{MarginalModel::normal(0.3, 0.08), MarginalModel::uniform(0.1, 0.5),
                                  MarginalModel::beta(2.0, 3.0, -0.6, 0.0)};
  auto eval = [net](const double* z) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(5);
    p[1] = z[0];
    p[2] = z[1];
    p[3] = -0.6;
    p[4] = z[2];
    p[0] = -p.sum();
    return net.transfer_capability(p, 0, 3);
  };
  return TestModel("dc_ttc_toy", std::move(marg), DependenceModel::from_copula(equicorrelation(3, rho)), eval);
}

namespace {

struct Unit {
  double pmin, pmax, no_load, b, c;
};

constexpr Unit kUnits[] = {
    {100, 300, 500, 18, 0.004}, {80, 250, 450, 20, 0.005}, {60, 200, 400, 22, 0.006}, {50, 150, 300, 25, 0.008},
    {40, 120, 250, 28, 0.010},  {30, 100, 200, 32, 0.012}, {20, 80, 150, 36, 0.015},  {20, 60, 120, 40, 0.020},
    {10, 50, 100, 45, 0.025},   {10, 40, 80, 50, 0.030}};
constexpr double kLoad = 1100.0;
constexpr double kWindCapacity = 600.0;
constexpr double kVoll = 1000.0;

double wind_power(double v, double cap) {
  if (v < 3.0 || v >= 25.0) return 0.0;
  if (v >= 12.0) return cap;
  const double r = (v - 3.0) / 9.0;
  return cap * r * r * r;
}

double dispatch_cost(double demand) {
  // Merit order by full-load average cost; the table is already sorted that way.
  std::size_t n = 0;
  double cap = 0.0;
  while (n < std::size(kUnits) && cap < demand) cap += kUnits[n++].pmax;
  double pmin = 0.0, cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pmin += kUnits[i].pmin;
    cost += kUnits[i].no_load;
  }
  auto output = [&](double lambda, std::size_t i) {
    const Unit& u = kUnits[i];
    return std::clamp((lambda - u.b) / (2.0 * u.c), u.pmin, u.pmax);
  };
  auto energy = [&](double lambda) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = output(lambda, i);
      c += kUnits[i].b * p + kUnits[i].c * p * p;
    }
    return c;
  };
  if (demand <= pmin) return cost + energy(-1e9);
  if (demand >= cap) return cost + energy(1e9) + kVoll * (demand - cap);
  double lo = 0.0, hi = 100.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += output(mid, i);
    (s < demand ? lo : hi) = mid;
  }
  return cost + energy(0.5 * (lo + hi));
}

}  // namespace

TestModel dispatch_toy(Index wind_inputs, double rho) {
  if (wind_inputs < 1) throw InputError("dispatch_toy needs at least one wind input");
  const double cap = kWindCapacity / static_cast<double>(wind_inputs);
  std::vector<MarginalModel> marg(static_cast<std::size_t>(wind_inputs), MarginalModel::beta(2.0, 4.0, 0.0, 25.0));
  auto eval = [wind_inputs, cap](const double* z) {
    double w = 0.0;
    for (Index j = 0; j < wind_inputs; ++j) w += wind_power(z[j], cap);
    return dispatch_cost(kLoad - w);
  };
  return TestModel("dispatch_toy", std::move(marg), DependenceModel::from_copula(ar1_correlation(wind_inputs, rho)),
                   eval);
}

std::vector<std::string> benchmark_names() {
  return {"linear_gaussian", "quadratic_copula", "ishigami_copula", "dc_ttc_toy", "dispatch_toy"};
}

TestModel make_benchmark(const std::string& name, const BenchConfig& config) {
  if (name == "linear_gaussian") {
    std::vector<double> a = config.a.empty() ? std::vector<double>{1.0, 1.0} : config.a;
    std::vector<double> s = config.sigma.empty() ? std::vector<double>(a.size(), 1.0) : config.sigma;
    if (s.size() != a.size()) throw InputError("linear_gaussian: --sigma needs one value per coefficient");
    return linear_gaussian(Eigen::Map<Eigen::VectorXd>(a.data(), static_cast<Index>(a.size())), config.rho,
                           Eigen::Map<Eigen::VectorXd>(s.data(), static_cast<Index>(s.size())));
  }
  if (name == "quadratic_copula") return quadratic_copula(config.rho);
  if (name == "ishigami_copula") return ishigami_copula(config.rho);
  if (name == "dc_ttc_toy") return dc_ttc_toy(config.rho);
  if (name == "dispatch_toy") return dispatch_toy(config.inputs > 0 ? config.inputs : 12, config.rho);
  std::string known;
  for (const auto& n : benchmark_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("unknown benchmark '" + name + "' (known: " + known + ")");
}

}  // namespace pcegsa
