#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "grouprank/experiment.hpp"

namespace grouprank {

enum class EmitFormat { csv, json };

/// "csv", "json" or "csv,json".
std::vector<EmitFormat> parse_formats(const std::string& text);

/// Reals in CSV output use six decimals.
std::string format_real(double value);

/// One row per (realization, method, L).
void write_curves_csv(std::ostream& out, const ExperimentResult& result);
/// One row per (realization, method).
void write_realizations_csv(std::ostream& out, const ExperimentResult& result);
/// One row per (method, L): mean/std of recall and AUC.
void write_aggregate_csv(std::ostream& out, const ExperimentResult& result);
/// One row per (p, q, method).
void write_grid_csv(std::ostream& out, const SweepResult& sweep);
/// One row per (p, q): GR minus CR mean recall at L = d.
void write_delta_csv(std::ostream& out, const SweepResult& sweep);

/// Debug dump of Lambda / Lambda* (object, level, size, reward) rows.
void write_group_table(std::ostream& out, const RatingMatrix& matrix, const GroupRewardTable& table);
/// Debug dump of A' as (user, object, rating, reward) rows.
void write_rewarding_matrix(std::ostream& out, const RatingMatrix& matrix, const RewardingMatrix& rewards);

nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult experiment_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SweepResult& sweep);
nlohmann::json to_json(const DatasetStats& stats);
nlohmann::json to_json(const ExperimentConfig& config);

/// Config echo plus tool version and a UTC timestamp.
nlohmann::json provenance(const ExperimentConfig& config);

/// Writes aggregate.csv, curves.csv, realizations.csv and/or result.json into
/// `directory` (created if needed). Returns the written paths. Throws IoError.
std::vector<std::filesystem::path> emit_results(const ExperimentResult& result, const ExperimentConfig& config,
                                                const std::vector<EmitFormat>& formats,
                                                const std::filesystem::path& directory);

/// Writes grid.csv, delta.csv and/or sweep.json.
std::vector<std::filesystem::path> emit_sweep(const SweepResult& sweep, const ExperimentConfig& config,
                                              const std::vector<EmitFormat>& formats,
                                              const std::filesystem::path& directory);

}  // namespace grouprank
