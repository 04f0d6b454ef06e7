// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "pcegsa/ancova.hpp"
#include "pcegsa/basis.hpp"
#include "pcegsa/bench_models.hpp"
#include "pcegsa/compare.hpp"
#include "pcegsa/oracle.hpp"
#include "pcegsa/parallel.hpp"
#include "pcegsa/regression.hpp"
#include "pcegsa/report.hpp"
#include "pcegsa/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#ifndef PCEGSA_CLI_PATH
#error "PCEGSA_CLI_PATH must point at the CLI binary"
#endif
#ifndef PCEGSA_DATA_DIR
#error "PCEGSA_DATA_DIR must point at tests/data"
#endif
#ifndef PCEGSA_WORK_DIR
#error "PCEGSA_WORK_DIR must name a scratch directory"
#endif

using namespace pcegsa;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TestModel linear(const std::vector<double>& a, double rho) {
  const Eigen::VectorXd av = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Index>(a.size()));
  return linear_gaussian(av, rho, Eigen::VectorXd::Ones(av.size()));
}

// Closed-form ANCOVA indices of sum a_j Z_j with unit variances and equicorrelation rho.
std::vector<AncovaIndex> linear_truth(const std::vector<double>& a, double rho) {
  const Eigen::VectorXd av = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Index>(a.size()));
  return linear_ancova_indices(av, equicorrelation(av.size(), rho));
}

Outcome decomposition_identity() {
  double worst = 0.0;
  int reports = 0;
  const std::vector<TestModel> models{linear({1.0, 1.0}, 0.5), quadratic_copula(0.5), ishigami_copula(0.5),
                                      dc_ttc_toy(0.5)};
  for (const auto& model : models) {
    const SampleMatrix train =
        sample_correlated(model.marginals(), model.dependence(), 120, 7, Design::lhs, kTrainingStream, model.input_names());
    const SampleMatrix eval = sample_correlated(model.marginals(), model.dependence(), 20000, 7, Design::plain,
                                                kEvaluationStream, model.input_names());
    const Eigen::VectorXd y = model.evaluate(train);
    for (Strategy s : kAllStrategies) {
      const PceModel m = fit_pce(train, y, s, model.marginals(), model.dependence());
      for (bool faithful : {false, true}) {
        worst = std::max(worst, std::abs(ancova_indices(m, eval, faithful).sum_check - 1.0));
        ++reports;
      }
    }
  }
  return {worst <= 1e-9, std::to_string(reports) + " reports, max |sum Cov/Var - 1| = " + fmt("%.2e", worst)};
}

Outcome linear_closed_form(double& runtime) {
  const auto t0 = std::chrono::steady_clock::now();
  CompareConfig cfg;
  cfg.m_p = 60;
  cfg.m_l = 100000;
  cfg.seed = 1;
  cfg.strategies = {Strategy::correlate};
  const Comparison c = compare_strategies(linear({1.0, 1.0}, 0.5), cfg);
  runtime = seconds_since(t0);
  const auto& ix = c.rows[0].report.indices;
  const double es = std::max(std::abs(ix[0].s - 0.5), std::abs(ix[1].s - 0.5));
  const double eu = std::abs(ix[0].s_u - 1.0 / 3.0);
  const bool ok = es <= 0.02 && eu <= 0.02 && runtime <= 10.0;
  return {ok, "S = (" + fmt("%.4f, %.4f", ix[0].s, ix[1].s) + "), S1_U = " + fmt("%.4f", ix[0].s_u) +
                  ", runtime " + fmt("%.2f s", runtime)};
}

Outcome substitution_mechanism() {
  CompareConfig cfg;
  cfg.m_p = 60;
  cfg.m_l = 100000;
  cfg.seed = 1;
  cfg.strategies = {Strategy::nataf};
  const TestModel model = linear({1.0, 1.0}, 0.5);
  const Comparison plain = compare_strategies(model, cfg);
  cfg.faithful = true;
  const Comparison faithful = compare_strategies(model, cfg);
  const auto sub = transform_substitution_error(Eigen::Vector2d(1.0, 1.0), equicorrelation(2, 0.5));
  const double e_sub = max_index_error(plain.rows[0].report.indices, sub.substituted);
  const double e_true = max_index_error(faithful.rows[0].report.indices, linear_truth({1.0, 1.0}, 0.5));
  return {e_sub <= 0.02 && e_true <= 0.02,
          "default vs closed-form substituted: " + fmt("%.4f", e_sub) + ", faithful vs truth: " + fmt("%.4f", e_true)};
}

Outcome comparison_direction() {
  int wins = 0, runs = 0;
  for (const std::string bench : {"linear", "quadratic"}) {
    for (double rho : {0.3, 0.5, 0.8}) {
      const TestModel model = bench == "linear" ? linear({1.0, 1.0}, rho) : quadratic_copula(rho);
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CompareConfig cfg;
        cfg.seed = seed;
        const Comparison c = compare_strategies(model, cfg);
        const bool win = c.rows[0].max_error <= c.rows[1].max_error && c.rows[0].max_error <= c.rows[2].max_error;
        wins += win ? 1 : 0;
        ++runs;
      }
    }
  }
  const double rate = static_cast<double>(wins) / runs;
  return {rate >= 0.8, std::to_string(wins) + "/" + std::to_string(runs) + " runs with PCE_correlate most accurate"};
}

Outcome independent_consistency() {
  const Index ml = 100000;
  const double tol = 5.0 / std::sqrt(static_cast<double>(ml));
  double worst_u = 0.0, worst_c = 0.0;
  const std::vector<TestModel> models{ishigami_copula(0.0), quadratic_copula(0.0), linear({1.0, 2.0, 0.5}, 0.0)};
  for (const auto& model : models) {
    const SampleMatrix train = sample_correlated(model.marginals(), model.dependence(), 400, 2, Design::lhs,
                                                 kTrainingStream, model.input_names());
    const SampleMatrix eval = sample_correlated(model.marginals(), model.dependence(), ml, 2, Design::plain,
                                                kEvaluationStream, model.input_names());
    FitOptions opt;
    opt.p_max = 8;
    const PceModel m = fit_pce(train, model.evaluate(train), Strategy::correlate, model.marginals(), model.dependence(), opt);
    const AncovaReport r = ancova_indices(m, eval);
    const SobolIndices sobol = sobol_indices(m);
    for (std::size_t j = 0; j < r.indices.size(); ++j) {
      worst_u = std::max(worst_u, std::abs(r.indices[j].s_u - sobol.first[static_cast<Index>(j)]));
      worst_c = std::max(worst_c, std::abs(r.indices[j].s_c));
    }
  }
  return {worst_u <= tol && worst_c <= tol, "max |S_U - Sobol| = " + fmt("%.4f", worst_u) + ", max |S_C| = " +
                                                fmt("%.4f", worst_c) + ", bound 5/sqrt(M_L) = " + fmt("%.4f", tol)};
}

Outcome sparse_recovery() {
  std::vector<MarginalModel> marg;
  for (int j = 0; j < 6; ++j) marg.push_back(j % 2 ? MarginalModel::uniform(-1.0, 2.0) : MarginalModel::normal(1.0, 0.5));
  const DependenceModel dep = DependenceModel::independent(6);
  const SampleMatrix z = sample_correlated(marg, dep, 60, 42);
  const BasisSet truth(strategy_univariate_bases(Strategy::correlate, marg, 2),
                       {MultiIndex({0, 0, 0, 0, 0, 0}), MultiIndex({1, 0, 0, 0, 0, 0}), MultiIndex({0, 0, 2, 0, 0, 0}),
                        MultiIndex({0, 1, 0, 0, 1, 0}), MultiIndex({0, 0, 0, 1, 0, 0})});
  Eigen::VectorXd coef(5);
  coef << 3.0, 1.5, -0.8, 0.6, 2.0;
  const Eigen::VectorXd y = evaluate_basis(truth, z.values()) * coef;
  const PceModel m = fit_pce(z, y, Strategy::correlate, marg, dep);

  bool support = m.basis().size() == truth.size();
  double err = 0.0;
  for (Index l = 0; l < truth.size() && support; ++l) {
    const auto& k = truth.indices()[static_cast<std::size_t>(l)];
    const auto it = std::find(m.basis().indices().begin(), m.basis().indices().end(), k);
    if (it == m.basis().indices().end()) {
      support = false;
      break;
    }
    err = std::max(err, std::abs(m.coefficients()[it - m.basis().indices().begin()] - coef[l]));
  }
  const bool ok = support && err < 1e-6 && m.info().p_selected == 2;
  return {ok, std::string("support ") + (support ? "exact" : "wrong") + ", max coefficient error " + fmt("%.2e", err) +
                  ", p_selected = " + std::to_string(m.info().p_selected)};
}

Outcome orthonormality() {
  Eigen::VectorXd hm(13), lm(13);
  for (int k = 0; k <= 12; ++k) {
    hm[k] = MarginalModel::normal(0.0, 1.0).raw_moment(k);
    lm[k] = MarginalModel::uniform(-1.0, 1.0).raw_moment(k);
  }
  const UnivariateBasis h = build_univariate_basis(hm, 6), l = build_univariate_basis(lm, 6);
  double rec = 0.0;
  for (int k = 0; k < 6; ++k) rec = std::max({rec, std::abs(h.a()[k]), std::abs(l.a()[k])});
  for (int k = 1; k <= 6; ++k) {
    rec = std::max(rec, std::abs(h.b()[k] - k));
    rec = std::max(rec, std::abs(l.b()[k] - k * k / (4.0 * k * k - 1.0)));
  }

  // Gram matrix of a D=2, p=2 basis from M = 10 L samples of the default (LHS) design
  double gram = 0.0;
  Index ml = 0;
  for (const auto& law : {MarginalModel::normal(0.0, 1.0), MarginalModel::uniform(-1.0, 1.0)}) {
    const std::vector<MarginalModel> marg(2, law);
    const BasisSet b = BasisSet::total_degree(strategy_univariate_bases(Strategy::correlate, marg, 2), 2);
    ml = 10 * b.size();
    const SampleMatrix z = sample_correlated(marg, DependenceModel::independent(2), ml, 1);
    const Eigen::MatrixXd psi = evaluate_basis(b, z.values());
    const Eigen::MatrixXd g = psi.transpose() * psi / static_cast<double>(ml);
    gram = std::max(gram, (g - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff());
  }
  return {rec <= 1e-10 && gram <= 0.05, "recurrence deviation " + fmt("%.1e", rec) + ", Gram max |G - I| = " +
                                            fmt("%.3f", gram) + " at M = " + std::to_string(ml)};
}

Outcome oracle_convergence() {
  const std::vector<Index> levels{10000, 40000, 160000};
  const int seeds = 64;
  std::vector<double> rms;
  for (Index m : levels) {
    double acc = 0.0;
    for (const auto& [a, rho] : std::vector<std::pair<std::vector<double>, double>>{{{1.0, 1.0}, 0.5}, {{1.0, 2.0, 0.5}, 0.5}}) {
      const TestModel model = linear(a, rho);
      const auto truth = linear_truth(a, rho);
      for (int s = 1; s <= seeds; ++s) {
        const double e = max_index_error(mc_ancova(model, m, static_cast<std::uint64_t>(s)).indices, truth);
        acc += e * e;
      }
    }
    rms.push_back(std::sqrt(acc / (2.0 * seeds)));
  }
  // quadrupling M is two halvings of the error scale; report the per-halving ratio
  bool ok = true;
  std::string ratios;
  for (std::size_t k = 1; k < rms.size(); ++k) {
    const double per_halving = std::sqrt(rms[k - 1] / rms[k]);
    ok = ok && per_halving >= 1.2 && per_halving <= 1.7;
    ratios += (k > 1 ? ", " : "") + fmt("%.3f", per_halving);
  }
  return {ok, "RMS errors " + fmt("%.4f", rms[0]) + " / " + fmt("%.4f", rms[1]) + " / " + fmt("%.4f", rms[2]) +
                  ", per-halving ratios " + ratios};
}

Outcome smoothing_study() {
  const std::vector<double> a{1.0, 2.0, 0.5};
  const double rho = 0.5;
  const TestModel model = linear(a, rho);
  const SampleMatrix train = sample_correlated(model.marginals(), model.dependence(), 60, 1, Design::lhs,
                                               kTrainingStream, model.input_names());
  const SampleMatrix eval = sample_correlated(model.marginals(), model.dependence(), 100000, 1, Design::plain,
                                              kEvaluationStream, model.input_names());
  const PceModel m = fit_pce(train, model.evaluate(train), Strategy::correlate, model.marginals(), model.dependence());
  const int top = ancova_indices(m, eval).ranking.front();

  const ResponseFn surrogate = [&m](const Eigen::MatrixXd& z) -> Eigen::VectorXd { return m.predict(z); };
  const ResponseFn truth = [&model](const Eigen::MatrixXd& z) -> Eigen::VectorXd { return model.evaluate(z); };
  const Eigen::MatrixXd sigma = equicorrelation(3, rho);
  const Eigen::Vector3d av(a[0], a[1], a[2]);
  const double var = av.dot(sigma * av);

  int best = -1;
  double best_delta = 0.0, top_err = 0.0;
  bool fields = true;
  for (int j = 0; j < 3; ++j) {
    SmoothingResult r = smooth_and_requantify(surrogate, model.marginals(), eval, {j});
    attach_reference(r, smooth_and_requantify(truth, model.marginals(), eval, {j}));
    Eigen::Vector3d keep = av;
    keep[j] = 0.0;
    const double closed = std::sqrt(keep.dot(sigma * keep) / var) - 1.0;
    if (j == top) top_err = std::abs(r.delta_sigma - closed);
    if (best < 0 || r.delta_sigma < best_delta) {
      best = j;
      best_delta = r.delta_sigma;
    }
    const auto js = smoothing_to_json(r);
    fields = fields && js.contains("delta_sigma_pct") && js.contains("delta_sigma_rr_pct") &&
             !js["delta_sigma_rr_pct"].is_null() &&
             std::abs(js["delta_sigma_pct"].get<double>() - 100.0 * (r.sigma_after - r.sigma_before) / r.sigma_before) <
                 1e-9 &&
             std::abs(js["delta_sigma_rr_pct"].get<double>() -
                      100.0 * (r.sigma_after - *r.reference_sigma_after) / *r.reference_sigma_after) < 1e-9;
  }
  const bool ok = best == top && 100.0 * top_err <= 0.5 && fields;
  return {ok, "top-ranked Z" + std::to_string(top + 1) + ", largest reduction Z" + std::to_string(best + 1) +
                  ", |delta_sigma - closed form| = " + fmt("%.3f pp", 100.0 * top_err) +
                  (fields ? ", both percentages emitted" : ", percentage fields missing")};
}

Outcome fixture_table() {
  const IndexTable t = read_index_table(std::string(PCEGSA_DATA_DIR) + "/reference_index_table.csv");
  const std::string text = render_index_table(t);
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);

  bool ok = lines.size() == 4 && t.inputs.size() == 6;
  ok = ok && lines[0].find("Z1") != std::string::npos && lines[0].find("Z6") != std::string::npos &&
       lines[0].find("Sum") != std::string::npos;
  std::string sum;
  if (ok) {
    std::istringstream row(lines[1]);
    std::vector<std::string> cells{std::istream_iterator<std::string>(row), std::istream_iterator<std::string>()};
    ok = cells.size() == 8 && cells[0] == "PCE_correlate" && cells[2] == "0.0000";
    if (ok) sum = cells.back();
    for (std::size_t r = 2; r < lines.size() && ok; ++r) ok = lines[r].size() == lines[1].size();
  }
  ok = ok && sum == "1.0001";
  return {ok, "rendered " + std::to_string(lines.size()) + " lines, PCE_correlate row sum " + (sum.empty() ? "?" : sum)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool run(const std::string& args) {
  const std::string cmd = std::string("\"") + PCEGSA_CLI_PATH + "\" " + args + " --quiet > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

Outcome determinism() {
  const fs::path root = fs::path(PCEGSA_WORK_DIR) / "determinism";
  fs::remove_all(root);
  const std::string data = std::string(PCEGSA_DATA_DIR) + "/degree2_train.csv";
  const std::vector<std::pair<std::string, std::string>> jobs{
      {"compare", "compare --model quadratic_copula --rho 0.5 --mp 80 --ml 20000 --oracle-m 50000 --seed 3"},
      {"fit", "fit --input " + data + " --strategy all --seed 3"},
      {"smooth", "smooth --model linear_gaussian --coef 1,2,0.5 --top 2 --ml 20000 --seed 3"},
      {"oracle", "oracle --model dc_ttc_toy --oracle-m 50000 --seed 3"},
      {"demo", "demo --seed 3"},
  };
  int files = 0;
  for (const auto& [name, args] : jobs) {
    std::vector<fs::path> dirs;
    for (int threads : {1, 4, 8}) {
      const fs::path out = root / (name + "_t" + std::to_string(threads));
      fs::create_directories(out);
      if (!run(args + " --threads " + std::to_string(threads) + " --out \"" + out.string() + "\""))
        return {false, name + " failed to run with " + std::to_string(threads) + " threads"};
      if (name == "fit") {
        std::string models;
        for (const char* s : {"correlate", "nataf", "rosenblatt"}) models += " \"" + (out / "model_").string() + s + ".json\"";
        if (!run("analyze" + models + " --ml 20000 --seed 3 --threads " + std::to_string(threads) + " --out \"" +
                 out.string() + "\""))
          return {false, "analyze failed with " + std::to_string(threads) + " threads"};
      }
      dirs.push_back(out);
    }
    std::vector<fs::path> names;
    for (const auto& e : fs::directory_iterator(dirs[0])) names.push_back(e.path().filename());
    if (names.empty()) return {false, name + " produced no files"};
    for (const auto& f : names) {
      const std::string ref = slurp(dirs[0] / f);
      for (std::size_t k = 1; k < dirs.size(); ++k)
        if (!fs::exists(dirs[k] / f) || slurp(dirs[k] / f) != ref)
          return {false, name + ": " + f.string() + " differs between thread counts"};
      ++files;
    }
  }
  return {true, std::to_string(files) + " output files byte-identical across 1, 4 and 8 threads"};
}

Outcome scale_smoke() {
  const TestModel model = dispatch_toy(120, 0.5);
  const SampleMatrix z = sample_correlated(model.marginals(), model.dependence(), 1100, 1, Design::lhs,
                                           kTrainingStream, model.input_names());
  const Eigen::VectorXd y = model.evaluate(z);
  FitOptions opt;
  opt.p_max = 2;
  const auto t0 = std::chrono::steady_clock::now();
  const PceModel m = fit_pce(z, y, Strategy::correlate, model.marginals(), model.dependence(), opt);
  const double t = seconds_since(t0);
  const std::uint64_t l = total_degree_count(120, 2);
  return {t < 60.0 && l == 7381, "L = " + std::to_string(l) + ", fit " + fmt("%.1f s", t) + ", p_selected = " +
                                     std::to_string(m.info().p_selected) + ", e_cloo = " + fmt("%.3g", m.info().e_cloo)};
}

}  // namespace

int main() {
  set_warnings_enabled(false);
  double runtime = 0.0;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"decomposition identity", decomposition_identity},
      {"linear-Gaussian closed form", [&] { return linear_closed_form(runtime); }},
      {"transform substitution error", substitution_mechanism},
      {"strategy comparison direction", comparison_direction},
      {"independent-input consistency", independent_consistency},
      {"sparse recovery", sparse_recovery},
      {"orthonormality", orthonormality},
      {"MC oracle convergence", oracle_convergence},
      {"smoothing study", smoothing_study},
      {"index table fixture", fixture_table},
      {"determinism across threads", determinism},
      {"scale smoke test", scale_smoke},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
