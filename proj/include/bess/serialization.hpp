#pragma once

#include <filesystem>
#include <json.hpp>

#include "bess/finance.hpp"

namespace bess {

using Json = nlohmann::ordered_json;

Json to_json(const DailyResult& result);
DailyResult daily_result_from_json(const Json& j);

Json to_json(const DispatchSolution& solution);
DispatchSolution dispatch_solution_from_json(const Json& j);

Json to_json(const LifecycleLedger& ledger);
LifecycleLedger ledger_from_json(const Json& j);

Json to_json(const ClusterModel& model);
ClusterModel cluster_model_from_json(const Json& j);

Json to_json(const TypicalDaySet& set);
Json to_json(const MarketDay& day);

/// Writes with two-space indentation and a trailing newline.
void write_json(const Json& j, const std::filesystem::path& file);
/// Throws MalformedFile on unreadable or invalid JSON.
Json read_json(const std::filesystem::path& file);

/// Writes each cluster's representative day in the hourly price layout,
/// `<dir>/cluster_<i>/{energy,reg,res}.csv`, plus `<dir>/assignments.csv`
/// (`date,cluster`).
void write_cluster_csv(const ClusterModel& model, const std::filesystem::path& dir);

}  // namespace bess
