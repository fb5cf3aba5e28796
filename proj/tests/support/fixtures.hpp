#pragma once
// Test fixtures and independent oracles. Nothing here calls into the
// library's solver or accounting code.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <vector>

#include "bess/dispatch.hpp"
#include "bess/error.hpp"

namespace bess::testing {

/// Code of the bess::Error thrown by `f`, or nothing if it returns normally.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

struct ToyDay {
  std::vector<double> energy, reg_cap, reg_perf, res;

  explicit ToyDay(std::size_t hours = 0)
      : energy(hours), reg_cap(hours), reg_perf(hours), res(hours) {}
  PriceHorizon view() const { return {energy, reg_cap, reg_perf, res}; }
  std::size_t hours() const { return energy.size(); }
};

double unit(std::mt19937_64& rng);
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Random prices; ancillary prices non-negative.
MarketDay random_day(std::mt19937_64& rng, const Date& date);
ToyDay random_toy_day(std::mt19937_64& rng, std::size_t hours);

struct BruteForce {
  bool feasible = false;
  double best = 0.0;
  std::size_t schedules = 0;  // feasible schedules visited
};

/// Case-study ratings with lossless conversion and no self-discharge, so
/// discretised schedules can end exactly at E_min. Not grid-aligned: E_max,
/// t_reg and the degradation cost keep the optimum off the bid grid.
BatteryParams brute_force_battery();

/// Enumerates every schedule with bids in {0, P_r/2, P_r} and returns the
/// best objective. Plain re-statement of the daily model, hour by hour.
BruteForce brute_force_dispatch(const ToyDay& day, const BatteryParams& b, double n_100);

/// Largest violation of the daily model's constraints, each scaled by
/// max(1, |rhs|). Complementarity is not included.
double max_violation(const DispatchSolution& s, const PriceHorizon& p, const BatteryParams& b);

/// Objective re-derived from the schedule, with degradation from the total
/// variation of the SoC trajectory.
double objective_of(const DispatchSolution& s, const PriceHorizon& p, const BatteryParams& b,
                    double n_100);

/// Half-cycle depths by scanning for turning points of the sequence after
/// removing repeated values.
std::vector<double> turning_point_depths(const std::vector<double>& soc, double rated_energy);

/// A year of days drawn from three distinct shapes plus small noise;
/// `labels` receives each day's shape.
std::vector<MarketDay> planted_year(int year, std::uint64_t seed, std::vector<int>& labels);

/// The regulation-dominated day used for the revenue split checks.
MarketDay regulation_night_day();

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace bess::testing
