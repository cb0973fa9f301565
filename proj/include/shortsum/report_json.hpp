#pragma once

// JSON views of the report types (nlohmann::json, found by ADL).

#include "json.hpp"

#include "shortsum/arcs.hpp"
#include "shortsum/meanvalue.hpp"
#include "shortsum/sweep.hpp"

namespace shortsum {

void to_json(nlohmann::json& j, const ExpSumSpec& s);
void to_json(nlohmann::json& j, const MeanValueReport& r);
void to_json(nlohmann::json& j, const ErrorSumMeasurement& m);
void to_json(nlohmann::json& j, const ArcConfig& c);
void to_json(nlohmann::json& j, const ArcReport& r);
void to_json(nlohmann::json& j, const DftIdentity& d);
void to_json(nlohmann::json& j, const MainTerm& m);
void to_json(nlohmann::json& j, const SweepConfig& c);
void to_json(nlohmann::json& j, const SweepRecord& r);
void to_json(nlohmann::json& j, const FitResult& f);

/// Reads a sweep configuration; see docs/sweep_config.md for the schema.
SweepConfig sweep_config_from_json(const nlohmann::json& j);

/// {"config", "records", "fit" | "fit_error", "notes"}.
nlohmann::json sweep_summary(const SweepConfig& config, std::span<const SweepRecord> records);

}  // namespace shortsum
