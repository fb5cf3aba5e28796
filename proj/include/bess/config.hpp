#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bess/finance.hpp"

namespace bess {

/// One sensitivity case. Multipliers apply on top of the base configuration.
struct ScenarioSpec {
  std::string name;
  double price_scale = 1.0;  // all four price families
  double n100_scale = 1.0;
  std::optional<double> k_dec_override;

  void validate() const;
  bool operator==(const ScenarioSpec&) const = default;
};

struct MarketConfig {
  std::filesystem::path price_root;
  int year = 0;
  std::optional<std::filesystem::path> regd_signal;
  std::optional<std::filesystem::path> rega_signal;
  double cadence_s = 2.0;
  double price_scale = 1.0;
};

struct Config {
  std::string chemistry = "lfp";
  BatteryParams battery = case_study_battery();
  bool cost_bat_unit_set = false;  // battery.cost_bat_unit given explicitly
  DegradationParams degradation = lfp_degradation();
  CostModel costs = lfp_costs();
  MarketConfig market;
  LifecycleConfig lifecycle;
  DiscountSchedule discount = DiscountSchedule::parse("0.08x5,0.07x5,0.06x40");
  std::vector<ScenarioSpec> scenarios;

  /// Battery parameters handed to the optimizer: cost_bat_unit defaults to
  /// the replacement cost of the cost model.
  BatteryParams dispatch_battery() const;
  void validate() const;
};

/// Reads an INI file (sections battery, degradation, costs, market, signal,
/// lifecycle, finance, sensitivity). Unknown sections or keys, unparsable
/// values and invariant violations throw InvalidConfig. Relative paths are
/// resolved against the file's directory. `chemistry` replaces the file's
/// preset choice when given.
Config load_config(const std::filesystem::path& file,
                   const std::optional<std::string>& chemistry = std::nullopt);
Config parse_config(const std::string& text, const std::filesystem::path& base_dir,
                    const std::optional<std::string>& chemistry = std::nullopt);

/// Scenario table with header `name,price_scale,n100_scale,k_dec`; an empty
/// k_dec keeps the base value.
std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& file);
void write_scenarios(const std::vector<ScenarioSpec>& scenarios, const std::filesystem::path& file);

/// Base configuration with the scenario's perturbations applied.
Config apply_scenario(const Config& base, const ScenarioSpec& scenario);

}  // namespace bess
