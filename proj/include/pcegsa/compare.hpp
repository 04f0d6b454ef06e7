#pragma once

#include "pcegsa/oracle.hpp"
#include "pcegsa/regression.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace pcegsa {

/// Substreams: training sample, evaluation sample (the oracle uses kOracleStream).
inline constexpr std::uint64_t kTrainingStream = 1;
inline constexpr std::uint64_t kEvaluationStream = 2;

struct CompareConfig {
  Index m_p = 60;
  Index m_l = 10000;
  Index m_oracle = 100000;
  int p_max = 5;
  std::uint64_t seed = 1;
  int bins = 50;
  bool faithful = false;
  Design design = Design::lhs;
  std::vector<Strategy> strategies{Strategy::correlate, Strategy::nataf, Strategy::rosenblatt};
};

struct StrategyOutcome {
  Strategy strategy = Strategy::correlate;
  PceModel model;
  AncovaReport report;
  double max_error = 0.0;  ///< max |index - oracle| over S, S_U, S_C
  double ks = 0.0;         ///< KS distance between surrogate and oracle responses
};

struct Comparison {
  std::string benchmark;
  CompareConfig config;
  AncovaReport reference;
  std::vector<StrategyOutcome> rows;
};

/// Fits every requested strategy on one training sample, evaluates all of
/// them on one evaluation sample and scores them against the Monte Carlo oracle.
Comparison compare_strategies(const TestModel& model, const CompareConfig& config);

/// strategy,<S per input>,max_abs_error,ks; the oracle row comes first.
void write_comparison_csv(std::ostream& out, const Comparison& c);
nlohmann::json comparison_to_json(const Comparison& c);
/// S table with 4 decimals (strategies by inputs).
std::string render_comparison(const Comparison& c);

}  // namespace pcegsa
