#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liftscore/core.hpp"

namespace liftscore {

inline constexpr int kModelSchemaVersion = 1;

/// Model document (JSON):
///   {schema_version: 1, sex: "M"|"F", degree, coefficients: [ascending],
///    normalization_points, domain_kg: [lo, hi], extrapolation_kg: [lo, hi],
///    fit_meta: {r_squared, sample_size, source_label, snapshot_date} | null}
/// Doubles are written as shortest round-trip decimals.
std::string model_to_json(const ScoringModel& model);
ScoringModel model_from_json(std::string_view text);

ScoringModel load_model_file(const std::filesystem::path& path);
void save_model_file(const std::filesystem::path& path, const ScoringModel& model);

/// Classic Wilks coefficient file:
///   {schema_version: 1, kind: "wilks_classic", source,
///    models: [{sex, coefficients: [6 ascending], valid_kg: [lo, hi]}, ...]}
std::vector<WilksClassicCoefficients> load_wilks_file(const std::filesystem::path& path);
const WilksClassicCoefficients& wilks_for(const std::vector<WilksClassicCoefficients>& all, Sex sex);

/// Ships alongside the library (data/wilks_classic.json).
std::filesystem::path default_wilks_file();

/// Built-in names: "revised-2019-m", "revised-2019-f", "wilks-classic"
/// (sex taken from `sex_hint`, default male), "wilks-classic-m",
/// "wilks-classic-f". Anything else is treated as a model file path.
ScoringModel resolve_model(std::string_view name_or_path, std::optional<Sex> sex_hint = {},
                           const std::filesystem::path& wilks_file = default_wilks_file());
bool is_builtin_model_name(std::string_view name);

}  // namespace liftscore
