#include "pcegsa/lar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcegsa {

LarPath lar_path(const Eigen::Ref<const Eigen::MatrixXd>& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                 Index max_active) {
  const Index m = design.rows(), l = design.cols();
  if (m < 2) throw InputError("lar_path needs at least 2 samples");
  if (y.size() != m) throw InputError("lar_path: response length does not match design rows");
  if (!design.allFinite() || !y.allFinite()) throw InputError("lar_path: non-finite input");

  LarPath path;
  const double ybar = y.mean();
  const Eigen::VectorXd yc = y.array() - ybar;
  const double ynorm = yc.norm();
  if (ynorm <= 1e-14 * (std::abs(ybar) * std::sqrt(static_cast<double>(m)) + 1e-300)) return path;

  // Standardized design; zero-variance columns never enter.
  Eigen::MatrixXd xs = design.rowwise() - design.colwise().mean();
  std::vector<char> excluded(static_cast<std::size_t>(l), 0);
  for (Index j = 0; j < l; ++j) {
    const double n = xs.col(j).norm();
    const double scale = design.col(j).cwiseAbs().maxCoeff();
    if (n <= 1e-12 * std::max(scale, 1e-300) * std::sqrt(static_cast<double>(m))) {
      excluded[static_cast<std::size_t>(j)] = 1;
      xs.col(j).setZero();
    } else {
      xs.col(j) /= n;
    }
  }

  Index cap = std::min(m - 1, l);
  if (max_active >= 0) cap = std::min(cap, max_active);
  if (cap <= 0) return path;
  Eigen::VectorXd c = xs.transpose() * yc;
  std::vector<char> active(static_cast<std::size_t>(l), 0);
  std::vector<Index> act;
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(cap, cap);  // lower Cholesky factor of X_A^T X_A

  Index joining = -1;
  {
    double best = -1.0;
    for (Index j = 0; j < l; ++j)
      if (!excluded[static_cast<std::size_t>(j)] && std::abs(c[j]) > best) {
        best = std::abs(c[j]);
        joining = j;
      }
  }
  const double c0 = joining >= 0 ? std::abs(c[joining]) : 0.0;
  if (joining < 0 || c0 <= 0.0) return path;

  while (true) {
    if (joining >= 0) {
      // Cholesky update with the joining column.
      const Index k = static_cast<Index>(act.size());
      Eigen::VectorXd cross(k);
      for (Index i = 0; i < k; ++i) cross[i] = xs.col(act[static_cast<std::size_t>(i)]).dot(xs.col(joining));
      Eigen::VectorXd row = cross;
      if (k > 0) chol.topLeftCorner(k, k).triangularView<Eigen::Lower>().solveInPlace(row);
      const double d2 = 1.0 - row.squaredNorm();
      if (d2 <= 1e-10) {
        warn("LAR: column " + std::to_string(joining) + " is collinear with the active set; skipped");
        excluded[static_cast<std::size_t>(joining)] = 1;
      } else {
        chol.block(k, 0, 1, k) = row.transpose();
        chol(k, k) = std::sqrt(d2);
        act.push_back(joining);
        active[static_cast<std::size_t>(joining)] = 1;
        path.entry_order.push_back(joining);
      }
    }
    if (act.empty()) break;
    const Index k = static_cast<Index>(act.size());

    double big_c = 0.0;
    Eigen::VectorXd s(k);
    for (Index i = 0; i < k; ++i) {
      const double ci = c[act[static_cast<std::size_t>(i)]];
      big_c = std::max(big_c, std::abs(ci));
      s[i] = ci >= 0 ? 1.0 : -1.0;
    }
    if (big_c <= 1e-12 * c0) break;

    const auto lk = chol.topLeftCorner(k, k);
    Eigen::VectorXd g = s;
    lk.triangularView<Eigen::Lower>().solveInPlace(g);
    lk.triangularView<Eigen::Lower>().transpose().solveInPlace(g);
    const double norm_a = 1.0 / std::sqrt(s.dot(g));
    const Eigen::VectorXd w = norm_a * g;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
    for (Index i = 0; i < k; ++i) u.noalias() += w[i] * xs.col(act[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd a = xs.transpose() * u;

    const double full = big_c / norm_a;
    double gamma = full;
    joining = -1;
    if (k < cap) {
      for (Index j = 0; j < l; ++j) {
        if (active[static_cast<std::size_t>(j)] || excluded[static_cast<std::size_t>(j)]) continue;
        for (const double cand : {(big_c - c[j]) / (norm_a - a[j]), (big_c + c[j]) / (norm_a + a[j])}) {
          if (cand > 1e-14 * full && cand < gamma) {
            gamma = cand;
            joining = j;
          }
        }
      }
    }
    c.noalias() -= gamma * a;
    if (joining < 0) break;  // reached the least-squares fit on the active set
    if (static_cast<Index>(act.size()) >= cap) break;
  }
  return path;
}

LooTracker::LooTracker(const Eigen::Ref<const Eigen::VectorXd>& y) : y_(y) {
  const Index m = y_.size();
  if (m < 2) throw InputError("LOO error needs at least 2 samples");
  var_y_ = mean_variance(y_).variance;
  q_.resize(m, m);
  rinv_ = Eigen::MatrixXd::Zero(m, m);
  const double sq = std::sqrt(static_cast<double>(m));
  q_.col(0).setConstant(1.0 / sq);
  rinv_(0, 0) = 1.0 / sq;
  trace_inv_ = 1.0 / static_cast<double>(m);
  hat_ = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  residual_ = y_.array() - y_.mean();
  p_ = 1;
}

bool LooTracker::add_column(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Index m = y_.size();
  if (x.size() != m) throw InputError("LOO column length mismatch");
  if (p_ >= m) return false;
  Eigen::VectorXd v = x;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(p_);
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd coef = q_.leftCols(p_).transpose() * v;
    v.noalias() -= q_.leftCols(p_) * coef;
    r += coef;
  }
  const double rho = v.norm();
  if (!(rho > 1e-10 * x.norm())) return false;
  q_.col(p_) = v / rho;
  const Eigen::VectorXd rr = rinv_.topLeftCorner(p_, p_).triangularView<Eigen::Upper>() * r;
  rinv_.col(p_).head(p_) = -rr / rho;
  rinv_(p_, p_) = 1.0 / rho;
  trace_inv_ += (rr.squaredNorm() + 1.0) / (rho * rho);
  hat_.array() += q_.col(p_).array().square();
  residual_.noalias() -= q_.col(p_).dot(residual_) * q_.col(p_);
  ++p_;
  return true;
}

double LooTracker::error() const {
  const Index m = y_.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (p_ >= m) return inf;
  if (var_y_ <= 0.0) return 0.0;
  if (hat_.maxCoeff() >= 1.0 - 1e-10) return inf;
  KahanSum s;
  for (Index i = 0; i < m; ++i) {
    const double e = residual_[i] / (1.0 - hat_[i]);
    s.add(e * e);
  }
  const double md = static_cast<double>(m);
  const double correction = md / (md - static_cast<double>(p_)) * (1.0 + trace_inv_);
  return correction * (s.value() / md) / var_y_;
}

double corrected_loo_error(const Eigen::Ref<const Eigen::MatrixXd>& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                           const std::vector<Index>& active_set) {
  const Index m = design.rows();
  if (y.size() != m) throw InputError("corrected_loo_error: response length does not match design rows");
  if (static_cast<Index>(active_set.size()) + 1 >= m)
    throw InputError("corrected_loo_error: active set of " + std::to_string(active_set.size()) +
                     " terms saturates M = " + std::to_string(m));
  LooTracker tracker(y);
  for (Index j : active_set) {
    if (j < 0 || j >= design.cols()) throw InputError("corrected_loo_error: column index out of range");
    if (!tracker.add_column(design.col(j)))
      throw NumericalError("corrected_loo_error: column " + std::to_string(j) + " is linearly dependent");
  }
  const double e = tracker.error();
  if (!std::isfinite(e)) throw NumericalError("corrected_loo_error: hat diagonal reached 1 (exact interpolation)");
  return e;
}

}  // namespace pcegsa
