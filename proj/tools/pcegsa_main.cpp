// pcegsa: command-line front end for PCE-based ANCOVA sensitivity analysis.

#include "pcegsa/ancova.hpp"
#include "pcegsa/bench_models.hpp"
#include "pcegsa/compare.hpp"
#include "pcegsa/csv.hpp"
#include "pcegsa/model_io.hpp"
#include "pcegsa/oracle.hpp"
#include "pcegsa/parallel.hpp"
#include "pcegsa/regression.hpp"
#include "pcegsa/report.hpp"
#include "pcegsa/sampling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace pcegsa;
using nlohmann::json;

namespace {

struct Options {
  std::string input;
  std::string strategy = "all";
  Index mp = 60;
  Index ml = 10000;
  Index m_oracle = 100000;
  int pmax = 5;
  std::uint64_t seed = 1;
  std::string corr;
  int top = 0;
  int bins = 50;
  bool faithful = false;
  std::string out = ".";
  std::string model = "linear_gaussian";
  double rho = 0.5;
  std::vector<double> coef;
  Index inputs = 0;
  std::string marginal_kind = "empirical";
  std::string design = "lhs";
  std::vector<std::string> sets;
  std::vector<std::string> model_files;
  std::size_t threads = 0;
  bool quiet = false;
  bool model_given = false;
};

void note(const std::string& s) { std::cerr << "info: " << s << '\n'; }

std::vector<Strategy> strategies(const std::string& s) {
  if (s == "all") return {std::begin(kAllStrategies), std::end(kAllStrategies)};
  std::vector<Strategy> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_strategy(item));
  if (out.empty()) throw InputError("--strategy is empty");
  return out;
}

fs::path out_dir(const Options& o) {
  fs::path p(o.out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw InputError("cannot create output directory '" + o.out + "'");
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  f << text;
}

std::string csv_text(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

TestModel benchmark(const Options& o) {
  BenchConfig cfg;
  cfg.rho = o.rho;
  cfg.a = o.coef;
  cfg.inputs = o.inputs;
  return make_benchmark(o.model, cfg);
}

void require_positive(Index v, const char* flag) {
  if (v <= 0) throw InputError(std::string(flag) + " must be positive");
}

int cmd_fit(const Options& o) {
  if (o.input.empty()) throw InputError("fit needs --input <csv>");
  const Dataset data = split_response(read_csv(o.input));
  if (!data.response) throw InputError("input CSV has no 'response' column (it must be the last column)");
  const SampleMatrix& z = data.inputs;
  if (z.rows() < z.cols() + 2)
    throw InputError("M_p = " + std::to_string(z.rows()) + " rows is too few for D = " + std::to_string(z.cols()) +
                     " inputs (need at least D+2)");

  const MarginalKind kind = parse_marginal_kind(o.marginal_kind);
  std::vector<MarginalModel> marginals;
  for (Index j = 0; j < z.cols(); ++j) marginals.push_back(fit_marginal(z.values().col(j), kind, 2 * o.pmax + 2));

  DependenceModel dep = DependenceModel::independent(z.cols());
  if (!o.corr.empty()) {
    const Eigen::MatrixXd r = read_matrix_csv(o.corr);
    if (r.rows() != z.cols()) throw InputError("--corr matrix size does not match the number of inputs");
    dep = DependenceModel::from_copula(r);
    note("copula correlation read from " + o.corr);
  } else {
    dep = DependenceModel::estimate(z.values(), marginals);
    note("copula correlation estimated from the input sample (Gaussian rank)");
  }

  const fs::path dir = out_dir(o);
  FitOptions fo;
  fo.p_max = o.pmax;
  for (Strategy s : strategies(o.strategy)) {
    const PceModel m = fit_pce(z, *data.response, s, marginals, dep, fo);
    const fs::path file = dir / ("model_" + short_name(s) + ".json");
    save_model(m, file.string());
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-14s p_selected=%d e_cloo=%.6g terms=%lld M_p=%lld -> %s\n", to_string(s).c_str(),
                  m.info().p_selected, m.info().e_cloo, static_cast<long long>(m.info().active_set_size + 1),
                  static_cast<long long>(m.info().m_p), file.string().c_str());
    std::cout << buf;
  }
  return 0;
}

SampleMatrix evaluation_sample(const Options& o, const PceModel& m) {
  if (!o.input.empty()) {
    const Dataset data = split_response(read_csv(o.input));
    if (data.inputs.cols() != m.dim()) throw InputError("--input columns do not match the model inputs");
    return SampleMatrix(data.inputs.values(), m.names());
  }
  require_positive(o.ml, "--ml");
  return sample_correlated(m.marginals(), m.dependence(), o.ml, o.seed, Design::plain, kEvaluationStream, m.names());
}

int cmd_analyze(const Options& o) {
  if (o.model_files.empty()) throw InputError("analyze needs at least one model file");
  if (o.input.empty()) require_positive(o.ml, "--ml");
  const fs::path dir = out_dir(o);
  for (const auto& path : o.model_files) {
    const PceModel m = load_model(path);
    const SampleMatrix z = evaluation_sample(o, m);
    const AncovaReport r = ancova_indices(m, z, o.faithful);
    const std::string tag = short_name(m.strategy());
    write_json_file(report_to_json(r), (dir / ("report_" + tag + ".json")).string());
    write_text(dir / ("indices_" + tag + ".csv"), csv_text([&](std::ostream& s) { write_indices_csv(s, r); }));
    const Eigen::VectorXd y = m.predict(z, o.faithful);
    write_text(dir / ("cdf_" + tag + ".csv"), csv_text([&](std::ostream& s) { write_cdf_csv(s, y); }));
    std::cout << render_report(r) << '\n';
  }
  return 0;
}

CompareConfig compare_config(const Options& o) {
  CompareConfig c;
  c.m_p = o.mp;
  c.m_l = o.ml;
  c.m_oracle = o.m_oracle;
  c.p_max = o.pmax;
  c.seed = o.seed;
  c.bins = o.bins;
  c.faithful = o.faithful;
  c.design = parse_design(o.design);
  c.strategies = strategies(o.strategy);
  require_positive(c.m_p, "--mp");
  require_positive(c.m_l, "--ml");
  return c;
}

int run_compare(const Options& o, const TestModel& bench) {
  const Comparison c = compare_strategies(bench, compare_config(o));
  const fs::path dir = out_dir(o);
  write_text(dir / "compare.csv", csv_text([&](std::ostream& s) { write_comparison_csv(s, c); }));
  write_json_file(comparison_to_json(c), (dir / "compare.json").string());
  std::cout << bench.name() << "  M_p=" << o.mp << "  M_L=" << o.ml << "  seed=" << o.seed << "\n"
            << render_comparison(c);
  return 0;
}

int cmd_compare(const Options& o) { return run_compare(o, benchmark(o)); }

int cmd_demo(const Options& o) {
  Options d = o;
  d.model = "linear_gaussian";
  const TestModel bench = benchmark(d);
  run_compare(d, bench);
  Eigen::VectorXd a = Eigen::VectorXd::Ones(bench.dim());
  if (!d.coef.empty()) a = Eigen::Map<const Eigen::VectorXd>(d.coef.data(), static_cast<Index>(d.coef.size()));
  const Eigen::MatrixXd cov = bench.dependence().copula_correlation();
  const SubstitutionError e = transform_substitution_error(a, cov);
  std::cout << "\nclosed form: exact vs substituted S\n";
  char buf[128];
  for (std::size_t j = 0; j < e.exact.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%-6s %.4f  %.4f\n", e.exact[j].input.c_str(), e.exact[j].s, e.substituted[j].s);
    std::cout << buf;
  }
  return 0;
}

int cmd_oracle(const Options& o) {
  const TestModel bench = benchmark(o);
  require_positive(o.m_oracle, "--oracle-m");
  const AncovaReport r = mc_ancova(bench, o.m_oracle, o.seed, o.bins);
  json j = report_to_json(r);
  j["benchmark"] = bench.name();
  j["seed"] = o.seed;
  j["bins"] = o.bins;
  if (!bench.known_indices().empty()) {
    json k = json::array();
    for (const auto& a : bench.known_indices()) k.push_back({{"input", a.input}, {"S", a.s}, {"S_U", a.s_u}, {"S_C", a.s_c}});
    j["closed_form"] = std::move(k);
  }
  const fs::path dir = out_dir(o);
  write_json_file(j, (dir / "oracle.json").string());
  std::cout << bench.name() << '\n' << render_report(r);
  return 0;
}

std::vector<std::vector<int>> smoothing_sets(const Options& o, const std::vector<std::string>& names,
                                             const AncovaReport& ranked) {
  std::vector<std::vector<int>> sets;
  for (const auto& s : o.sets) {
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(item);
    sets.push_back(resolve_inputs(names, items));
    if (sets.back().empty()) throw InputError("empty smoothing set");
  }
  if (o.top > 0) {
    if (o.top > static_cast<int>(names.size())) throw InputError("--top exceeds the number of inputs");
    sets.emplace_back(ranked.ranking.begin(), ranked.ranking.begin() + o.top);
  }
  if (sets.empty()) throw InputError("smooth needs --set <inputs> or --top K");
  return sets;
}

int cmd_smooth(const Options& o) {
  std::vector<PceModel> models;
  std::optional<TestModel> truth;
  const bool have_files = !o.model_files.empty();
  if (have_files) {
    for (const auto& f : o.model_files) models.push_back(load_model(f));
  }
  if (!have_files || o.model_given) truth = benchmark(o);
  if (!have_files) {
    require_positive(o.mp, "--mp");
    const SampleMatrix train = sample_correlated(truth->marginals(), truth->dependence(), o.mp, o.seed,
                                                 parse_design(o.design), kTrainingStream, truth->input_names());
    const Eigen::VectorXd y = truth->evaluate(train);
    FitOptions fo;
    fo.p_max = o.pmax;
    for (Strategy s : strategies(o.strategy))
      models.push_back(fit_pce(train, y, s, truth->marginals(), truth->dependence(), fo));
  }

  const fs::path dir = out_dir(o);
  std::ostringstream csv;
  csv << "strategy,set,sigma_before,sigma_after,delta_sigma_pct,reference_sigma_after,delta_sigma_rr_pct\n";
  json all = json::array();
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %-20s %12s %12s %10s %10s\n", "strategy", "set", "sigma_before",
                "sigma_after", "dsigma%", "dsigma_rr%");
  std::cout << buf;
  for (const auto& m : models) {
    if (truth && truth->dim() != m.dim()) throw InputError("model and benchmark dimensions differ");
    const SampleMatrix z = evaluation_sample(o, m);
    AncovaReport r = ancova_indices(m, z, o.faithful);
    const auto sets = smoothing_sets(o, m.names(), r);
    const bool faithful = o.faithful;
    const ResponseFn surrogate = [&m, faithful](const Eigen::MatrixXd& x) { return m.predict(x, faithful); };
    for (const auto& set : sets) {
      SmoothingResult s = smooth_and_requantify(surrogate, m.marginals(), z, set);
      if (truth) {
        const ResponseFn exact = [&](const Eigen::MatrixXd& x) { return truth->evaluate(x); };
        attach_reference(s, smooth_and_requantify(exact, truth->marginals(), z, set));
      }
      std::string label;
      for (const auto& n : s.names) label += (label.empty() ? "" : "+") + n;
      csv << to_string(m.strategy()) << ',' << label << ',' << format_double(s.sigma_before) << ','
          << format_double(s.sigma_after) << ',' << format_double(100.0 * s.delta_sigma) << ','
          << (s.reference_sigma_after ? format_double(*s.reference_sigma_after) : "") << ','
          << (s.delta_sigma_rr ? format_double(100.0 * *s.delta_sigma_rr) : "") << '\n';
      char rr[32] = "-";
      if (s.delta_sigma_rr) std::snprintf(rr, sizeof rr, "%.2f", 100.0 * *s.delta_sigma_rr);
      std::snprintf(buf, sizeof buf, "%-14s %-20s %12.4f %12.4f %10.2f %10s\n", to_string(m.strategy()).c_str(),
                    label.c_str(), s.sigma_before, s.sigma_after, 100.0 * s.delta_sigma, rr);
      std::cout << buf;
      r.smoothing.push_back(std::move(s));
    }
    all.push_back(report_to_json(r));
  }
  write_text(dir / "smoothing.csv", csv.str());
  write_json_file(all, (dir / "smoothing.json").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCE-based ANCOVA global sensitivity analysis for correlated inputs"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    c->add_option("--out", o.out, "Output directory")->capture_default_str();
    c->add_option("--threads", o.threads, "Worker threads (results do not depend on it)");
    c->add_flag("--quiet", o.quiet, "Silence warnings");
  };
  auto fitting = [&](CLI::App* c) {
    c->add_option("--strategy", o.strategy, "correlate|nataf|rosenblatt|all (comma list allowed)")->capture_default_str();
    c->add_option("--pmax", o.pmax, "Maximum total degree")->capture_default_str()->check(CLI::Range(1, 20));
    c->add_option("--design", o.design, "Training design: lhs|plain")->capture_default_str();
  };
  auto bench = [&](CLI::App* c) {
    c->add_option("--model", o.model, "Benchmark: linear_gaussian, quadratic_copula, ishigami_copula, dc_ttc_toy, dispatch_toy")
        ->capture_default_str();
    c->add_option("--rho", o.rho, "Copula correlation of the benchmark")->capture_default_str();
    c->add_option("--coef", o.coef, "linear_gaussian coefficients")->delimiter(',');
    c->add_option("--inputs", o.inputs, "dispatch_toy wind inputs (default 12)");
    c->add_option("--bins", o.bins, "Bins of the Monte Carlo oracle")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--oracle-m", o.m_oracle, "Monte Carlo oracle sample size")->capture_default_str();
  };
  auto eval = [&](CLI::App* c) {
    c->add_option("--ml", o.ml, "Evaluation sample size M_L")->capture_default_str();
    c->add_flag("--faithful", o.faithful, "Evaluate nataf/rosenblatt models through their transform");
  };

  auto* fit = app.add_subcommand("fit", "Fit PCE models to a CSV with a trailing 'response' column");
  common(fit);
  fitting(fit);
  fit->add_option("--input", o.input, "Training CSV")->required();
  fit->add_option("--corr", o.corr, "Copula correlation matrix CSV (overrides estimation)");
  fit->add_option("--marginal-kind", o.marginal_kind, "Marginal family fitted per input")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "ANCOVA indices, CSV tables and CDF data for fitted models");
  common(analyze);
  eval(analyze);
  analyze->add_option("models", o.model_files, "Model JSON files")->required();
  analyze->add_option("--input", o.input, "Evaluation CSV (default: draw M_L samples)");

  auto* compare = app.add_subcommand("compare", "Compare the three strategies against the Monte Carlo oracle");
  common(compare);
  fitting(compare);
  bench(compare);
  eval(compare);
  compare->add_option("--mp", o.mp, "Training sample size M_p")->capture_default_str();

  auto* smooth = app.add_subcommand("smooth", "Variance reduction from fixing inputs at their means");
  common(smooth);
  fitting(smooth);
  bench(smooth);
  eval(smooth);
  smooth->add_option("models", o.model_files, "Model JSON files (default: fit on the benchmark)");
  smooth->add_option("--mp", o.mp, "Training sample size M_p")->capture_default_str();
  smooth->add_option("--set", o.sets, "Comma-separated inputs smoothed jointly (repeatable)");
  smooth->add_option("--top", o.top, "Smooth the top-K inputs of each model's ranking");
  smooth->add_option("--input", o.input, "Evaluation CSV (default: draw M_L samples)");

  auto* oracle = app.add_subcommand("oracle", "Monte Carlo ANCOVA reference for a benchmark");
  common(oracle);
  bench(oracle);

  auto* demo = app.add_subcommand("demo", "Linear-Gaussian strategy comparison with the closed-form error");
  common(demo);
  fitting(demo);
  eval(demo);
  demo->add_option("--rho", o.rho, "Correlation")->capture_default_str();
  demo->add_option("--coef", o.coef, "Coefficients")->delimiter(',');
  demo->add_option("--mp", o.mp, "Training sample size M_p")->capture_default_str();
  demo->add_option("--oracle-m", o.m_oracle, "Monte Carlo oracle sample size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_worker_threads(o.threads > 0 ? o.threads : std::max(1u, std::thread::hardware_concurrency()));
    if (o.quiet) set_warnings_enabled(false);
    o.model_given = smooth->count("--model") > 0;
    if (*fit) return cmd_fit(o);
    if (*analyze) return cmd_analyze(o);
    if (*compare) return cmd_compare(o);
    if (*smooth) return cmd_smooth(o);
    if (*oracle) return cmd_oracle(o);
    if (*demo) return cmd_demo(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << json{{"error", "numerical"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
