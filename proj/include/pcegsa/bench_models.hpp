#pragma once

#include "pcegsa/ancova.hpp"
#include "pcegsa/core.hpp"
#include "pcegsa/dependence.hpp"
#include "pcegsa/marginal.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pcegsa {

/// HDMR components of a benchmark on a sample: column j of `first_order` is
/// G_j(z_j); `higher` holds the remaining components G_beta, |beta| >= 2.
struct HdmrSample {
  Eigen::MatrixXd first_order;
  std::vector<Eigen::VectorXd> higher;
};

/// Benchmark with a known input distribution and, where available, a closed-form HDMR.
class TestModel {
 public:
  using Eval = std::function<double(const double* z)>;
  using Hdmr = std::function<HdmrSample(const Eigen::MatrixXd& z)>;

  TestModel(std::string name, std::vector<MarginalModel> marginals, DependenceModel dep, Eval eval,
            Hdmr hdmr = nullptr, std::vector<AncovaIndex> known_indices = {});

  const std::string& name() const { return name_; }
  Index dim() const { return static_cast<Index>(marginals_.size()); }
  const std::vector<std::string>& input_names() const { return names_; }
  const std::vector<MarginalModel>& marginals() const { return marginals_; }
  const DependenceModel& dependence() const { return dep_; }

  /// Row-parallel; identical output for any worker count.
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& z) const;
  Eigen::VectorXd evaluate(const SampleMatrix& z) const { return evaluate(z.values()); }

  bool has_known_hdmr() const { return static_cast<bool>(hdmr_); }
  HdmrSample known_hdmr(const Eigen::MatrixXd& z) const;
  /// Closed-form ANCOVA indices, when the model has them.
  const std::vector<AncovaIndex>& known_indices() const { return known_; }

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<MarginalModel> marginals_;
  DependenceModel dep_;
  Eval eval_;
  Hdmr hdmr_;
  std::vector<AncovaIndex> known_;
};

struct BenchConfig {
  double rho = 0.5;
  /// linear_gaussian coefficients (default (1, 1)) and standard deviations (default 1).
  std::vector<double> a;
  std::vector<double> sigma;
  /// dispatch_toy wind inputs (default 12; 120 is the stress configuration).
  Index inputs = 0;
};

std::vector<std::string> benchmark_names();
TestModel make_benchmark(const std::string& name, const BenchConfig& config = {});

/// Y = a^T Z, Z ~ N(0, diag(sigma) R diag(sigma)), R equicorrelated.
TestModel linear_gaussian(const Eigen::VectorXd& a, double rho, const Eigen::VectorXd& sigma);
/// Closed-form ANCOVA indices of Y = a^T Z with Cov[Z] = sigma.
std::vector<AncovaIndex> linear_ancova_indices(const Eigen::VectorXd& a, const Eigen::MatrixXd& cov);

/// Y = Z1 + 2 Z2^2 + 1.5 Z3 + 0.8 Z1 Z3 with Z1 ~ N(0,1), Z2 ~ LN(0, 0.5^2),
/// Z3 ~ U(-1, 1), equicorrelated Gaussian copula.
TestModel quadratic_copula(double rho);
/// Ishigami function (a = 7, b = 0.1) on U(-pi, pi)^3 with an equicorrelated copula.
TestModel ishigami_copula(double rho);

/// Lossless DC network with reactances and thermal limits.
class DcNetwork {
 public:
  struct Line {
    int from = 0;
    int to = 0;
    double x = 0.1;
    double limit = 1.0;
  };
  /// Throws InputError for non-positive reactances or limits, bad bus numbers,
  /// or a disconnected network.
  DcNetwork(int buses, std::vector<Line> lines, int slack = 0);

  int buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  /// Line flow per unit injection at each bus, withdrawn at the slack (lines x buses).
  const Eigen::MatrixXd& ptdf() const { return ptdf_; }
  Eigen::VectorXd flows(const Eigen::Ref<const Eigen::VectorXd>& injections) const;
  /// Largest additional transfer from `source` to `sink` before a line reaches its limit.
  double transfer_capability(const Eigen::Ref<const Eigen::VectorXd>& injections, int source, int sink) const;

 private:
  int buses_;
  int slack_;
  std::vector<Line> lines_;
  Eigen::MatrixXd ptdf_;
};

/// Five buses, six lines, stochastic injections at buses 2, 3 and 5 (1-based),
/// transfer from bus 1 to bus 4.
DcNetwork dc_toy_network();
TestModel dc_ttc_toy(double rho);

/// Ten thermal units with no-load, linear and quadratic costs, committed in
/// merit order against load net of wind; wind speeds are AR(1)-correlated.
TestModel dispatch_toy(Index wind_inputs, double rho);

}  // namespace pcegsa
