#pragma once

#include <string>

#include <Eigen/Core>

#include "mvtm/model.hpp"

namespace mvtm {

/// Writes the model as one JSON document (k, v, beta, gamma, subspace,
/// config, diagnostics), doubles at round-trip precision.
void save_model(const TopicModel& model, const std::string& path);

/// Inverse of save_model. Malformed JSON or inconsistent shapes throw
/// ParseError / DimensionError.
TopicModel load_model(const std::string& path);

/// CSV with a `# rows,cols` comment header, one matrix row per line,
/// round-trip doubles.
void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

Eigen::MatrixXd load_matrix_csv(const std::string& path);

}  // namespace mvtm
