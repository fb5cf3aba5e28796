#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bess/config.hpp"

namespace bess {

/// The configured year's prices, multiplied by market.price_scale.
std::vector<MarketDay> load_prices(const Config& config);
std::vector<MarketDay> scale_prices(std::vector<MarketDay> days, double factor);

/// Regulation energy rate per day from the configured RegD signal. A signal
/// shorter than two days gives one rate for every day; a longer one is cut
/// into whole days and reused cyclically by day of year. Without a signal
/// the battery's e_reg applies.
EregLookup regulation_rates(const Config& config);

struct PipelineResult {
  LifecycleRun run;
  CashFlowSeries cashflows;
  IrrResult irr;
  double lcos = 0.0;
};

/// Lifecycle, cash flows, IRR and LCOS for a configuration and its year of
/// prices (already scaled).
PipelineResult run_pipeline(const Config& config, const std::vector<MarketDay>& year_days,
                            const EregLookup& e_reg = {});

/// One line of the sensitivity table. Money columns are first-year values.
struct SensitivityRow {
  std::string scenario;
  double income = 0.0;
  double cost_op = 0.0;
  double cost_loss = 0.0;
  double cap_loss = 0.0;  // percent of capacity lost in year one
  int lifetime = 0;       // years
  double irr = 0.0;       // percent
};

/// Standard case first, then each scenario re-run through the whole pipeline.
std::vector<SensitivityRow> run_sensitivity(const Config& base,
                                            const std::vector<ScenarioSpec>& scenarios);
std::vector<SensitivityRow> run_sensitivity(const Config& base,
                                            const std::vector<ScenarioSpec>& scenarios,
                                            const std::vector<MarketDay>& base_year,
                                            const EregLookup& e_reg = {});
SensitivityRow sensitivity_row(const std::string& name, const PipelineResult& result);

/// CSV with header `scenario,income,cost_op,cost_loss,cap_loss,lifetime,irr`,
/// two decimals.
void write_sensitivity(const std::vector<SensitivityRow>& rows, const std::filesystem::path& file);
std::string format_sensitivity(const std::vector<SensitivityRow>& rows);
std::vector<SensitivityRow> load_sensitivity(const std::filesystem::path& file);

}  // namespace bess
