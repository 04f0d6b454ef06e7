#include "pcegsa/sampling.hpp"

#include "pcegsa/parallel.hpp"
#include "pcegsa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcegsa {
namespace {

struct CopulaDraw {
  Eigen::MatrixXd gaussian;  // correlated standard normals, filled for plain designs
  Eigen::MatrixXd levels;    // probability levels in (0,1)
};

CopulaDraw draw(Index d, const DependenceModel& dep, Index m, std::uint64_t seed, Design design,
                std::uint64_t stream) {
  if (m < 1) throw InputError("sample count must be >= 1");
  if (dep.dim() != d) throw InputError("dependence dimension does not match marginal count");
  Eigen::LLT<Eigen::MatrixXd> llt(dep.copula_correlation());
  if (llt.info() != Eigen::Success) throw InputError("copula correlation is not positive definite");
  const Eigen::MatrixXd lower = llt.matrixL();
  const CounterRng rng(seed, stream);

  CopulaDraw out;
  out.gaussian.resize(m, d);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd g(d);
    for (std::size_t i = begin; i < end; ++i) {
      for (Index j = 0; j < d; ++j) g[j] = rng.normal(i, static_cast<std::uint64_t>(j));
      out.gaussian.row(static_cast<Index>(i)) = (lower * g).transpose();
    }
  });

  out.levels.resize(m, d);
  if (design == Design::plain) {
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        for (Index j = 0; j < d; ++j) out.levels(static_cast<Index>(i), j) = normal_cdf(out.gaussian(static_cast<Index>(i), j));
    });
    return out;
  }

  std::vector<Index> order(static_cast<std::size_t>(m));
  for (Index j = 0; j < d; ++j) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return out.gaussian(a, j) < out.gaussian(b, j); });
    for (Index r = 0; r < m; ++r) {
      const Index i = order[static_cast<std::size_t>(r)];
      const double jitter = rng.uniform(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(d + j));
      out.levels(i, j) = (static_cast<double>(r) + jitter) / static_cast<double>(m);
    }
  }
  out.gaussian.resize(0, 0);
  return out;
}

}  // namespace

Design parse_design(const std::string& name) {
  if (name == "plain") return Design::plain;
  if (name == "lhs") return Design::lhs;
  throw InputError("unknown design '" + name + "' (expected plain|lhs)");
}

std::string to_string(Design design) { return design == Design::plain ? "plain" : "lhs"; }

Eigen::MatrixXd sample_probability_levels(Index d, const DependenceModel& dep, Index m, std::uint64_t seed,
                                          Design design, std::uint64_t stream) {
  return draw(d, dep, m, seed, design, stream).levels;
}

SampleMatrix sample_correlated(const std::vector<MarginalModel>& marginals, const DependenceModel& dep, Index m,
                               std::uint64_t seed, Design design, std::uint64_t stream,
                               std::vector<std::string> names) {
  const auto d = static_cast<Index>(marginals.size());
  if (d < 1) throw InputError("at least one marginal is required");
  const CopulaDraw cd = draw(d, dep, m, seed, design, stream);
  Eigen::MatrixXd z(m, d);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t begin, std::size_t end) {
    for (std::size_t ii = begin; ii < end; ++ii) {
      const auto i = static_cast<Index>(ii);
      for (Index j = 0; j < d; ++j) {
        const auto& mg = marginals[static_cast<std::size_t>(j)];
        const auto& p = mg.parameters();
        // Gaussian-family marginals map the normal draw directly (no tail clipping).
        const double w = design == Design::plain ? cd.gaussian(i, j) : normal_icdf(cd.levels(i, j));
        switch (mg.kind()) {
          case MarginalKind::normal: z(i, j) = p[0] + p[1] * w; break;
          case MarginalKind::lognormal: z(i, j) = std::exp(p[0] + p[1] * w); break;
          default: z(i, j) = mg.icdf(cd.levels(i, j)); break;
        }
      }
    }
  });
  if (names.empty()) names = default_names(d);
  return SampleMatrix(std::move(z), std::move(names));
}

}  // namespace pcegsa
