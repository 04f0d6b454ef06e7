#pragma once

#include "pcegsa/regression.hpp"

#include <json.hpp>

#include <string>

namespace pcegsa {

nlohmann::json marginal_to_json(const MarginalModel& m);
MarginalModel marginal_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

/// Model document. Doubles are written in shortest round-trip form, so
/// coefficients survive a save/load cycle bit for bit.
nlohmann::json model_to_json(const PceModel& model);
PceModel model_from_json(const nlohmann::json& j);

void save_model(const PceModel& model, const std::string& path);
PceModel load_model(const std::string& path);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json_file(const nlohmann::json& doc, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

}  // namespace pcegsa
