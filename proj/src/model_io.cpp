#include "pcegsa/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace pcegsa {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd vector_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("model file: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json marginal_to_json(const MarginalModel& m) {
  json j;
  j["kind"] = to_string(m.kind());
  j["parameters"] = m.parameters();
  if (m.kind() == MarginalKind::empirical) {
    j["knots_x"] = m.knots_x();
    j["knots_p"] = m.knots_p();
    j["moments"] = m.stored_moments();
  }
  return j;
}

MarginalModel marginal_from_json(const json& j) {
  const MarginalKind kind = parse_marginal_kind(field(j, "kind").get<std::string>());
  if (kind == MarginalKind::empirical)
    return MarginalModel::empirical_from_state(field(j, "knots_x").get<std::vector<double>>(),
                                               field(j, "knots_p").get<std::vector<double>>(),
                                               field(j, "moments").get<std::vector<double>>());
  const auto p = field(j, "parameters").get<std::vector<double>>();
  auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw InputError("marginal '" + to_string(kind) + "' needs " + std::to_string(n) + " parameters");
  };
  switch (kind) {
    case MarginalKind::normal: need(2); return MarginalModel::normal(p[0], p[1]);
    case MarginalKind::lognormal: need(2); return MarginalModel::lognormal(p[0], p[1]);
    case MarginalKind::uniform: need(2); return MarginalModel::uniform(p[0], p[1]);
    case MarginalKind::beta: need(4); return MarginalModel::beta(p[0], p[1], p[2], p[3]);
    default: break;
  }
  throw InputError("unsupported marginal kind");
}

json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(std::move(r));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const Index n = static_cast<Index>(rows.size());
  const Index c = n ? static_cast<Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(n, c);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != c) throw InputError("ragged matrix in JSON");
    for (Index k = 0; k < c; ++k) m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return m;
}

json model_to_json(const PceModel& model) {
  json j;
  j["format"] = "pcegsa-model";
  j["version"] = 1;
  j["strategy"] = short_name(model.strategy());
  j["label"] = to_string(model.strategy());
  j["p"] = model.degree();
  j["inputs"] = model.names();

  json idx = json::array();
  for (const auto& k : model.basis().indices()) idx.push_back(k.degrees());
  j["multi_indices"] = std::move(idx);
  j["coefficients"] = to_vector(model.coefficients());

  json marg = json::array();
  for (const auto& m : model.marginals()) marg.push_back(marginal_to_json(m));
  j["marginals"] = std::move(marg);
  j["copula_correlation"] = matrix_to_json(model.dependence().copula_correlation());
  j["fictive_correlation"] = matrix_to_json(model.dependence().fictive_correlation());
  j["ordering"] = model.transform().ordering();

  json rec = json::array();
  for (const auto& u : model.basis().univariate())
    rec.push_back({{"a", to_vector(u.a())}, {"b", to_vector(u.b())}, {"requested_degree", u.requested_degree()}});
  j["recurrence"] = std::move(rec);

  const FitInfo& f = model.info();
  json hist = json::array();
  for (const auto& h : f.history)
    hist.push_back({{"p", h.p}, {"candidates", h.candidates}, {"active", h.active}, {"e_cloo", finite_or_null(h.e_cloo)}});
  j["fit_info"] = {{"p_selected", f.p_selected}, {"e_cloo", finite_or_null(f.e_cloo)},
                   {"active_set_size", f.active_set_size}, {"M_p", f.m_p},
                   {"clipped", f.clipped}, {"history", std::move(hist)}};
  return j;
}

PceModel model_from_json(const json& j) {
  try {
    const Strategy strategy = parse_strategy(field(j, "strategy").get<std::string>());
    const auto names = field(j, "inputs").get<std::vector<std::string>>();

    std::vector<MarginalModel> marginals;
    for (const auto& m : field(j, "marginals")) marginals.push_back(marginal_from_json(m));

    const Eigen::MatrixXd copula = matrix_from_json(field(j, "copula_correlation"));
    const Eigen::MatrixXd fictive = matrix_from_json(field(j, "fictive_correlation"));
    const DependenceModel dep = DependenceModel::from_parts(copula, fictive);

    std::vector<UnivariateBasis> uni;
    for (const auto& r : field(j, "recurrence"))
      uni.emplace_back(vector_from_json(field(r, "a")), vector_from_json(field(r, "b")),
                       r.value("requested_degree", -1));

    std::vector<MultiIndex> indices;
    for (const auto& k : field(j, "multi_indices")) indices.emplace_back(k.get<std::vector<int>>());
    BasisSet basis(std::move(uni), std::move(indices));
    Eigen::VectorXd coef = vector_from_json(field(j, "coefficients"));

    FitInfo info;
    if (j.contains("fit_info")) {
      const json& f = j.at("fit_info");
      info.p_selected = f.value("p_selected", 0);
      info.e_cloo = f.contains("e_cloo") && f.at("e_cloo").is_number() ? f.at("e_cloo").get<double>() : 0.0;
      info.active_set_size = f.value("active_set_size", Index{0});
      info.m_p = f.value("M_p", Index{0});
      info.clipped = f.value("clipped", std::size_t{0});
      if (f.contains("history"))
        for (const auto& h : f.at("history"))
          info.history.push_back({h.value("p", 0), h.value("candidates", Index{0}), h.value("active", Index{0}),
                                  h.at("e_cloo").is_number() ? h.at("e_cloo").get<double>()
                                                             : std::numeric_limits<double>::infinity()});
    }
    std::vector<int> ordering;
    if (j.contains("ordering")) ordering = j.at("ordering").get<std::vector<int>>();
    return PceModel(strategy, names, std::move(marginals), dep, std::move(basis), std::move(coef), std::move(info),
                    strategy == Strategy::rosenblatt ? ordering : std::vector<int>{});
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  }
}

void write_json_file(const json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw InputError("failed writing '" + path + "'");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void save_model(const PceModel& model, const std::string& path) { write_json_file(model_to_json(model), path); }

PceModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

}  // namespace pcegsa
