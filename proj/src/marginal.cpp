#include "pcegsa/marginal.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcegsa {
namespace {

const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Raw moments of lower + width * X from the raw moments of X.
double shifted_moment(const std::vector<double>& unit_moments, int k, double lower, double width) {
  double s = 0.0;
  for (int i = 0; i <= k; ++i)
    s += binomial(k, i) * std::pow(lower, k - i) * std::pow(width, i) * unit_moments[static_cast<std::size_t>(i)];
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

void check_sample(const Eigen::Ref<const Eigen::VectorXd>& samples) {
  require(samples.size() >= 10, "marginal fit needs at least 10 samples, got " + std::to_string(samples.size()));
  require(samples.allFinite(), "marginal fit: samples contain non-finite values");
  const auto mv = mean_variance(samples);
  const double scale = std::max(1.0, std::abs(mv.mean));
  if (!(std::sqrt(mv.variance) > 1e-12 * scale)) throw InputError("marginal fit: zero variance (degenerate sample)");
}

}  // namespace

double normal_cdf(double x) { return boost::math::cdf(kStdNormal, x); }

double normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw NumericalError("normal quantile requested outside (0,1)");
  return boost::math::quantile(kStdNormal, p);
}

std::string to_string(MarginalKind kind) {
  switch (kind) {
    case MarginalKind::normal: return "normal";
    case MarginalKind::lognormal: return "lognormal";
    case MarginalKind::uniform: return "uniform";
    case MarginalKind::beta: return "beta";
    case MarginalKind::empirical: return "empirical";
  }
  return "unknown";
}

MarginalKind parse_marginal_kind(const std::string& name) {
  for (auto k : {MarginalKind::normal, MarginalKind::lognormal, MarginalKind::uniform, MarginalKind::beta,
                 MarginalKind::empirical})
    if (to_string(k) == name) return k;
  throw InputError("unknown marginal kind '" + name + "'");
}

MarginalModel MarginalModel::normal(double mean, double sd) {
  require(std::isfinite(mean) && sd > 0 && std::isfinite(sd), "normal marginal needs finite mean and sd > 0");
  return MarginalModel(MarginalKind::normal, {mean, sd});
}

MarginalModel MarginalModel::lognormal(double mu, double sigma) {
  require(std::isfinite(mu) && sigma > 0 && std::isfinite(sigma), "lognormal marginal needs sigma > 0");
  return MarginalModel(MarginalKind::lognormal, {mu, sigma});
}

MarginalModel MarginalModel::uniform(double lower, double upper) {
  require(std::isfinite(lower) && std::isfinite(upper) && upper > lower, "uniform marginal needs lower < upper");
  return MarginalModel(MarginalKind::uniform, {lower, upper});
}

MarginalModel MarginalModel::beta(double alpha, double beta, double lower, double upper) {
  require(alpha > 0 && beta > 0, "beta marginal needs alpha, beta > 0");
  require(std::isfinite(lower) && std::isfinite(upper) && upper > lower, "beta marginal needs lower < upper");
  return MarginalModel(MarginalKind::beta, {alpha, beta, lower, upper});
}

MarginalModel MarginalModel::empirical(const Eigen::Ref<const Eigen::VectorXd>& samples, int max_moment_order) {
  check_sample(samples);
  require(max_moment_order >= 2, "empirical marginal needs max_moment_order >= 2");
  std::vector<double> sorted(samples.data(), samples.data() + samples.size());
  std::sort(sorted.begin(), sorted.end());
  const auto m = static_cast<double>(sorted.size());
  const double h = (sorted.back() - sorted.front()) / (m - 1.0);

  std::vector<double> kx{sorted.front() - 0.5 * h};
  std::vector<double> kp{0.0};
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    // tied group i..j-1 gets the mean plotting position
    const double pos = (0.5 * static_cast<double>(i + j - 1) + 0.5) / m;
    kx.push_back(sorted[i]);
    kp.push_back(pos);
    i = j;
  }
  kx.push_back(sorted.back() + 0.5 * h);
  kp.push_back(1.0);

  const Eigen::VectorXd mom = empirical_moments(samples, max_moment_order);
  return empirical_from_state(std::move(kx), std::move(kp), std::vector<double>(mom.data(), mom.data() + mom.size()));
}

MarginalModel MarginalModel::empirical_from_state(std::vector<double> knots_x, std::vector<double> knots_p,
                                                  std::vector<double> moments) {
  require(knots_x.size() >= 3 && knots_x.size() == knots_p.size(), "empirical marginal: bad knot arrays");
  require(moments.size() >= 3 && moments[0] == 1.0, "empirical marginal: moments must start with m0 = 1");
  for (std::size_t i = 1; i < knots_x.size(); ++i)
    require(knots_x[i] > knots_x[i - 1] && knots_p[i] > knots_p[i - 1], "empirical marginal: knots must increase");
  MarginalModel out(MarginalKind::empirical, {});
  out.knots_x_ = std::move(knots_x);
  out.knots_p_ = std::move(knots_p);
  out.moments_ = std::move(moments);
  require(out.variance() > 0, "empirical marginal: zero variance");
  return out;
}

std::pair<double, double> MarginalModel::support() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case MarginalKind::normal: return {-inf, inf};
    case MarginalKind::lognormal: return {0.0, inf};
    case MarginalKind::uniform: return {params_[0], params_[1]};
    case MarginalKind::beta: return {params_[2], params_[3]};
    case MarginalKind::empirical: return {knots_x_.front(), knots_x_.back()};
  }
  return {-inf, inf};
}

double MarginalModel::variance() const {
  const double m1 = raw_moment(1);
  return raw_moment(2) - m1 * m1;
}

int MarginalModel::max_moment_order() const {
  return kind_ == MarginalKind::empirical ? static_cast<int>(moments_.size()) - 1 : std::numeric_limits<int>::max();
}

double MarginalModel::raw_moment(int k) const {
  require(k >= 0, "raw_moment: negative order");
  if (k == 0) return 1.0;
  switch (kind_) {
    case MarginalKind::normal: {
      const double mu = params_[0];
      const double s2 = params_[1] * params_[1];
      double prev = 1.0, cur = mu;
      for (int i = 2; i <= k; ++i) {
        const double next = mu * cur + (i - 1) * s2 * prev;
        prev = cur;
        cur = next;
      }
      return cur;
    }
    case MarginalKind::lognormal:
      return std::exp(k * params_[0] + 0.5 * k * k * params_[1] * params_[1]);
    case MarginalKind::uniform: {
      std::vector<double> unit(static_cast<std::size_t>(k) + 1);
      for (int i = 0; i <= k; ++i) unit[static_cast<std::size_t>(i)] = 1.0 / (i + 1);
      return shifted_moment(unit, k, params_[0], params_[1] - params_[0]);
    }
    case MarginalKind::beta: {
      const double a = params_[0], b = params_[1];
      std::vector<double> unit(static_cast<std::size_t>(k) + 1, 1.0);
      for (int i = 1; i <= k; ++i)
        unit[static_cast<std::size_t>(i)] = unit[static_cast<std::size_t>(i - 1)] * (a + i - 1) / (a + b + i - 1);
      return shifted_moment(unit, k, params_[2], params_[3] - params_[2]);
    }
    case MarginalKind::empirical:
      if (k >= static_cast<int>(moments_.size()))
        throw InputError("empirical marginal only stores moments up to order " +
                         std::to_string(moments_.size() - 1));
      return moments_[static_cast<std::size_t>(k)];
  }
  return 0.0;
}

Eigen::VectorXd MarginalModel::raw_moments(int order) const {
  Eigen::VectorXd m(order + 1);
  for (int k = 0; k <= order; ++k) m[k] = raw_moment(k);
  return m;
}

double MarginalModel::cdf(double x) const {
  switch (kind_) {
    case MarginalKind::normal: return normal_cdf((x - params_[0]) / params_[1]);
    case MarginalKind::lognormal:
      return x <= 0 ? 0.0 : normal_cdf((std::log(x) - params_[0]) / params_[1]);
    case MarginalKind::uniform:
      return std::clamp((x - params_[0]) / (params_[1] - params_[0]), 0.0, 1.0);
    case MarginalKind::beta: {
      const double t = (x - params_[2]) / (params_[3] - params_[2]);
      if (t <= 0) return 0.0;
      if (t >= 1) return 1.0;
      return boost::math::cdf(boost::math::beta_distribution<double>(params_[0], params_[1]), t);
    }
    case MarginalKind::empirical: {
      if (x <= knots_x_.front()) return 0.0;
      if (x >= knots_x_.back()) return 1.0;
      const auto it = std::upper_bound(knots_x_.begin(), knots_x_.end(), x);
      const auto i = static_cast<std::size_t>(it - knots_x_.begin());
      const double w = (x - knots_x_[i - 1]) / (knots_x_[i] - knots_x_[i - 1]);
      return knots_p_[i - 1] + w * (knots_p_[i] - knots_p_[i - 1]);
    }
  }
  return 0.0;
}

double MarginalModel::icdf(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("icdf: probability outside [0,1]");
  switch (kind_) {
    case MarginalKind::normal: return params_[0] + params_[1] * normal_icdf(p);
    case MarginalKind::lognormal: return std::exp(params_[0] + params_[1] * normal_icdf(p));
    case MarginalKind::uniform: return params_[0] + p * (params_[1] - params_[0]);
    case MarginalKind::beta: {
      const double t = boost::math::quantile(boost::math::beta_distribution<double>(params_[0], params_[1]), p);
      return params_[2] + t * (params_[3] - params_[2]);
    }
    case MarginalKind::empirical: {
      if (p <= 0.0) return knots_x_.front();
      if (p >= 1.0) return knots_x_.back();
      const auto it = std::upper_bound(knots_p_.begin(), knots_p_.end(), p);
      const auto i = static_cast<std::size_t>(it - knots_p_.begin());
      const double w = (p - knots_p_[i - 1]) / (knots_p_[i] - knots_p_[i - 1]);
      return knots_x_[i - 1] + w * (knots_x_[i] - knots_x_[i - 1]);
    }
  }
  return 0.0;
}

Eigen::VectorXd empirical_moments(const Eigen::Ref<const Eigen::VectorXd>& samples, int max_order) {
  if (max_order < 0) throw InputError("empirical_moments: negative order");
  if (samples.size() == 0) throw InputError("empirical_moments: empty sample");
  if (!samples.allFinite()) throw InputError("empirical_moments: non-finite sample");
  std::vector<KahanSum> sums(static_cast<std::size_t>(max_order) + 1);
  for (Index i = 0; i < samples.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k <= max_order; ++k) {
      sums[static_cast<std::size_t>(k)].add(p);
      p *= samples[i];
    }
  }
  Eigen::VectorXd m(max_order + 1);
  const auto n = static_cast<double>(samples.size());
  for (int k = 0; k <= max_order; ++k) m[k] = sums[static_cast<std::size_t>(k)].value() / n;
  m[0] = 1.0;
  return m;
}

MarginalModel fit_marginal(const Eigen::Ref<const Eigen::VectorXd>& samples, MarginalKind kind,
                           int max_moment_order) {
  check_sample(samples);
  const auto mv = mean_variance(samples);
  const double lo = samples.minCoeff(), hi = samples.maxCoeff();
  const double pad = (hi - lo) / static_cast<double>(samples.size() - 1);
  switch (kind) {
    case MarginalKind::normal: return MarginalModel::normal(mv.mean, std::sqrt(mv.variance));
    case MarginalKind::lognormal: {
      require(lo > 0, "lognormal fit needs strictly positive samples");
      const Eigen::VectorXd logs = samples.array().log().matrix();
      const auto lmv = mean_variance(logs);
      return MarginalModel::lognormal(lmv.mean, std::sqrt(lmv.variance));
    }
    case MarginalKind::uniform: return MarginalModel::uniform(lo - pad, hi + pad);
    case MarginalKind::beta: {
      const double lower = lo - pad, upper = hi + pad, width = upper - lower;
      const double m = (mv.mean - lower) / width;
      const double v = mv.variance / (width * width);
      const double common = m * (1 - m) / v - 1;
      if (!(common > 0)) throw InputError("beta fit: sample variance too large for a beta law");
      return MarginalModel::beta(m * common, (1 - m) * common, lower, upper);
    }
    case MarginalKind::empirical: return MarginalModel::empirical(samples, max_moment_order);
  }
  throw InputError("unsupported marginal kind");
}

}  // namespace pcegsa
