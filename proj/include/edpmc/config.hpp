#pragma once

#include "edpmc/experiment.hpp"

#include <filesystem>

namespace edpmc {

// JSON config schema (all keys optional, defaults as in ExperimentConfig):
// {
//   "n_records": 100, "n_materials": 10,
//   "cr_grid": [0.1, 0.2, 0.3, 0.4, 0.5],
//   "trials": 50,
//   "methods": ["uniform", "stratified", "stratified_regression"],
//   "seed": 20, "threads": 0,
//   "completion": {"rank": 3, "lambda": 0.01, "tolerance": 1e-8,
//                   "max_sweeps": 500, "restarts": 4},
//   "regression": {"model": "kernel_ridge_rbf", "lambda": 0.01, "bandwidth": 0},
//   "cluster": {"k": 0, "distance": "euclidean"},
//   "material_cov": [18 ratios],
//   "model": {"story_masses_kg": [...], "story_stiffnesses_n_per_m": [...],
//             "yield_drifts_m": [...], "story_height_m": 3.0}
// }
// Unknown keys are rejected.
ExperimentConfig experiment_config_from_json_text(const std::string& text);
ExperimentConfig experiment_config_from_json_file(const std::filesystem::path& path);

// Canonical serialization of the effective config (sorted keys); the
// fingerprint hashes this.
std::string experiment_config_to_json(const ExperimentConfig& config);

StructureModel structure_model_from_json_text(const std::string& text);
StructureModel structure_model_from_json_file(const std::filesystem::path& path);

}  // namespace edpmc
