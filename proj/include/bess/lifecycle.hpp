#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bess/clustering.hpp"
#include "bess/dispatch.hpp"

namespace bess {

enum class LifecycleMethod { Typical, Cluster };

/// "typical" or "cluster"; throws InvalidArgument otherwise.
LifecycleMethod parse_method(std::string_view name);
std::string_view to_string(LifecycleMethod method);

inline constexpr int kTypicalDays = 36;
inline constexpr int kTypicalScale = 10;

struct TypicalDaySet {
  int year = 0;
  std::vector<Date> dates;  // calendar order
  int scale_factor = kTypicalScale;
};

/// Calendar rule only: per month the first weekday of days 1-10, the first
/// weekend day of days 11-20 and the first weekday of days 21-end, with
/// Jul 4, Nov 1 and Dec 25 substituted.
TypicalDaySet calendar_typical_days(int year);

/// Calendar rule followed by outlier re-selection against the year's
/// daily mean energy prices. `year_days` must hold every day of one year.
TypicalDaySet select_typical_days(std::span<const MarketDay> year_days);
TypicalDaySet select_typical_days(int year, const std::filesystem::path& price_root);

/// One representative day's contribution to a year, in ledger units:
/// cap_loss is the capacity fraction lost.
struct DayContribution {
  double income = 0.0;
  double cost_op = 0.0;
  double cap_loss = 0.0;
  double cost_loss = 0.0;
  double energy_out = 0.0;   // MWh
  double energy_in = 0.0;    // MWh
  double energy_cost = 0.0;  // $ paid for charging

  static DayContribution from(const DailyResult& result, const EnergyFlows& flows,
                              const DegradationParams& degradation);
};

/// Cumulative totals through year `year`.
struct LedgerRow {
  int year = 0;
  double income = 0.0;
  double cost_op = 0.0;
  double cap_loss = 0.0;
  double cost_loss = 0.0;
  double energy_out = 0.0;
  double energy_in = 0.0;
  double energy_cost = 0.0;

  bool operator==(const LedgerRow&) const = default;
};

/// Adds 10 x the sums of exactly 36 contributions. Throws WrongCount.
LedgerRow accumulate_typical(const LedgerRow& prev, std::span<const DayContribution> days);

/// Adds the day-count weighted sums. Throws CountMismatch when the counts
/// do not add up to `days_in_year` or their number differs from the results.
LedgerRow accumulate_cluster(const LedgerRow& prev, std::span<const DayContribution> clusters,
                             std::span<const int> day_counts, int days_in_year);

struct LifecycleLedger {
  LifecycleMethod method = LifecycleMethod::Cluster;
  std::vector<LedgerRow> rows;  // rows[i].year == i + 1
  int end_of_life_year = 0;
  double threshold = 0.20;

  /// Year-on-year increment of row `i` (row 0 against zero).
  LedgerRow annual(std::size_t i) const;
};

struct LifecycleConfig {
  LifecycleMethod method = LifecycleMethod::Cluster;
  int k = 5;
  Metric metric = Metric::Dtw;
  std::uint64_t seed = 7;
  int restarts = 1;  // seeds seed, seed+1, ...; lowest inertia wins
  double threshold = 0.20;
  bool accelerated_fade = false;
  double fade_knee = 0.20;
  double fade_multiplier = 3.0;
  int max_years = 50;

  void validate() const;
};

/// Extends a ledger year by year with a constant annual increment until the
/// cumulative capacity loss reaches the threshold. Throws NeverDies when the
/// annual loss is zero or the horizon exceeds max_years.
LifecycleLedger project_ledger(const LedgerRow& annual, LifecycleMethod method,
                               const LifecycleConfig& config);

/// Regulation energy rate to use for a given day, if it differs from the
/// battery default.
using EregLookup = std::function<std::optional<double>(const Date&)>;

struct LifecycleRun {
  LifecycleLedger ledger;
  std::optional<TypicalDaySet> typical;
  std::optional<ClusterModel> clusters;
  std::vector<MarketDay> representatives;
  std::vector<DailyResult> results;  // parallel to representatives
  std::vector<EnergyFlows> flows;
  std::vector<int> weights;          // days represented by each
};

/// Solves each representative day once and accumulates years until end of
/// life. `year_days` must cover one complete calendar year.
LifecycleRun run_lifecycle(std::span<const MarketDay> year_days, const BatteryParams& battery,
                           const DegradationParams& degradation, const LifecycleConfig& config,
                           const EregLookup& e_reg = {});

}  // namespace bess
