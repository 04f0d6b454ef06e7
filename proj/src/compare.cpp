#include "pcegsa/compare.hpp"

#include "pcegsa/csv.hpp"
#include "pcegsa/report.hpp"

#include <cstdio>
#include <ostream>

namespace pcegsa {

Comparison compare_strategies(const TestModel& model, const CompareConfig& config) {
  if (config.strategies.empty()) throw InputError("no strategies to compare");
  Comparison c;
  c.benchmark = model.name();
  c.config = config;

  const SampleMatrix train = sample_correlated(model.marginals(), model.dependence(), config.m_p, config.seed,
                                               config.design, kTrainingStream, model.input_names());
  const Eigen::VectorXd y = model.evaluate(train);
  const SampleMatrix eval = sample_correlated(model.marginals(), model.dependence(), config.m_l, config.seed,
                                              Design::plain, kEvaluationStream, model.input_names());

  const SampleMatrix oracle_z = sample_correlated(model.marginals(), model.dependence(), config.m_oracle, config.seed,
                                                  Design::plain, kOracleStream, model.input_names());
  c.reference = mc_ancova_on(model, oracle_z, config.bins);
  const Eigen::VectorXd oracle_y = model.evaluate(oracle_z);

  FitOptions opt;
  opt.p_max = config.p_max;
  for (Strategy s : config.strategies) {
    StrategyOutcome o;
    o.strategy = s;
    o.model = fit_pce(train, y, s, model.marginals(), model.dependence(), opt);
    o.report = ancova_indices(o.model, eval, config.faithful);
    o.max_error = max_index_error(o.report.indices, c.reference.indices);
    o.ks = ks_statistic(o.model.predict(eval, config.faithful), oracle_y);
    c.rows.push_back(std::move(o));
  }
  return c;
}

void write_comparison_csv(std::ostream& out, const Comparison& c) {
  out << "strategy";
  for (const auto& a : c.reference.indices) out << ',' << a.input;
  out << ",max_abs_error,ks\n";
  out << "MC_oracle";
  for (const auto& a : c.reference.indices) out << ',' << format_double(a.s);
  out << ",0,0\n";
  for (const auto& r : c.rows) {
    out << to_string(r.strategy);
    for (const auto& a : r.report.indices) out << ',' << format_double(a.s);
    out << ',' << format_double(r.max_error) << ',' << format_double(r.ks) << '\n';
  }
}

nlohmann::json comparison_to_json(const Comparison& c) {
  nlohmann::json j;
  j["benchmark"] = c.benchmark;
  j["M_p"] = c.config.m_p;
  j["M_L"] = c.config.m_l;
  j["M_oracle"] = c.config.m_oracle;
  j["p_max"] = c.config.p_max;
  j["seed"] = c.config.seed;
  j["bins"] = c.config.bins;
  j["faithful"] = c.config.faithful;
  j["design"] = to_string(c.config.design);
  j["reference"] = report_to_json(c.reference);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : c.rows) {
    nlohmann::json x = report_to_json(r.report);
    x["max_abs_error"] = r.max_error;
    x["ks"] = r.ks;
    x["p_selected"] = r.model.info().p_selected;
    x["e_cloo"] = r.model.info().e_cloo;
    rows.push_back(std::move(x));
  }
  j["strategies"] = std::move(rows);
  return j;
}

std::string render_comparison(const Comparison& c) {
  IndexTable t;
  for (const auto& a : c.reference.indices) t.inputs.push_back(a.input);
  t.values.resize(static_cast<Index>(c.rows.size()) + 1, static_cast<Index>(t.inputs.size()));
  t.rows.push_back("MC_oracle");
  for (std::size_t k = 0; k < t.inputs.size(); ++k) t.values(0, static_cast<Index>(k)) = c.reference.indices[k].s;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    t.rows.push_back(to_string(c.rows[i].strategy));
    for (std::size_t k = 0; k < t.inputs.size(); ++k)
      t.values(static_cast<Index>(i) + 1, static_cast<Index>(k)) = c.rows[i].report.indices[k].s;
  }
  std::string out = render_index_table(t);
  char buf[160];
  for (const auto& r : c.rows) {
    std::snprintf(buf, sizeof buf, "%-14s max_abs_error %.4f  ks %.4f  p=%d  e_cloo %.3g\n", to_string(r.strategy).c_str(),
                  r.max_error, r.ks, r.model.info().p_selected, r.model.info().e_cloo);
    out += buf;
  }
  return out;
}

}  // namespace pcegsa
