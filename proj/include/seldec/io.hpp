#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "seldec/evaluator.hpp"
#include "seldec/matrix.hpp"
#include "seldec/sequence.hpp"
#include "seldec/system.hpp"

namespace seldec::io {

using nlohmann::json;

/// Square matrix as rows of [re, im] pairs.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

struct SystemConfig {
  LevelSystem system;
  ComplexMatrix hamiltonian;
};

/// {"dim": 3, "labels": [...], "flip_set": [1, 2], "hamiltonian": [[[re, im], ...], ...]}
///
/// "labels" is optional. The Hamiltonian must be Hermitian within `tol`.
SystemConfig system_config_from_json(const json& j, double tol = kDefaultTolerance);
json system_config_to_json(const SystemConfig& config);

/// {"n": 4, "deltas": [...]}
json sequence_to_json(const PulseSequence& seq);
PulseSequence sequence_from_json(const json& j);

json evaluation_to_json(const EvaluationReport& report);
json scaling_fit_to_json(const ScalingFit& fit);

/// Header "tf,unwanted_residual,wanted_deviation".
void write_scaling_csv(std::ostream& os, const ScalingFit& fit);

/// Serializes with every double written to 17 significant digits.
std::string dump(const json& j);

json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace seldec::io
