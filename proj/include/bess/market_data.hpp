#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "bess/calendar.hpp"

namespace bess {

inline constexpr int kHoursPerDay = 24;

using HourlySeries = std::array<double, kHoursPerDay>;

/// Day-ahead prices for one operating day. Index 0 is hour 1.
struct MarketDay {
  Date date{};
  HourlySeries price_energy{};    // $/MWh, may be negative
  HourlySeries price_reg_cap{};   // $/MW
  HourlySeries price_reg_perf{};  // $/MW
  HourlySeries price_res{};       // $/MW

  bool operator==(const MarketDay&) const = default;
};

enum class SeriesField { Energy, RegCap, RegPerf, Reserve };

/// Throws NonFiniteValue or NegativeAncillaryPrice.
void validate(const MarketDay& day);

/// A regulation control signal sampled every `cadence_s` seconds.
class RegSignal {
 public:
  /// Throws DomainError if any sample is outside [-1, 1] or non-finite, or if
  /// the cadence is not positive.
  RegSignal(std::vector<double> samples, double cadence_s = 2.0);

  std::span<const double> samples() const noexcept { return samples_; }
  double cadence_s() const noexcept { return cadence_s_; }
  double duration_s() const noexcept { return cadence_s_ * static_cast<double>(samples_.size()); }

 private:
  std::vector<double> samples_;
  double cadence_s_;
};

/// Loads the three hourly price files of one day (see README for the schema).
/// Missing or extra hours are an error; nothing is interpolated.
MarketDay load_market_day(const std::filesystem::path& energy_file,
                          const std::filesystem::path& reg_file,
                          const std::filesystem::path& res_file, const Date& date);

/// Loads `<root>/<YYYY-MM-DD>/{energy,reg,res}.csv`.
MarketDay load_market_day(const std::filesystem::path& root, const Date& date);

/// Loads every day of `year` present under `root`, in calendar order. Throws
/// MissingData if any day of the year is absent.
std::vector<MarketDay> load_year(const std::filesystem::path& root, int year);

/// Writes the day's three CSV files into `dir` (created if needed). Values use
/// the shortest round-trip representation so that reloading is bit-exact.
void write_market_day(const MarketDay& day, const std::filesystem::path& dir);

RegSignal load_reg_signal(const std::filesystem::path& file, double cadence_s = 2.0);
void write_reg_signal(const RegSignal& signal, const std::filesystem::path& file);

/// Total absolute movement of the signal.
double mileage(const RegSignal& signal);

/// Mileage of RegD over mileage of RegA.
double mileage_ratio(const RegSignal& rega, const RegSignal& regd);

/// Mean hourly one-direction energy per MW of regulation capacity (MWh/MW/h):
/// half of the hourly integral of |signal|, averaged over whole hours.
double reg_energy_rate(const RegSignal& regd);

/// Cyclically rotates one price series by `hours` (positive = later).
MarketDay shift_series(const MarketDay& day, SeriesField field, int hours);

}  // namespace bess
