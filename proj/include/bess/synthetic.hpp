#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "bess/market_data.hpp"

namespace bess {

/// Day shapes of the synthetic generator.
enum class DayShape {
  ArbitrageWinter,  // morning, midday and evening energy peaks
  ArbitrageSummer,  // three peaks, the largest in the afternoon
  Weekend,          // lower prices, two moderate peaks
  RegulationNight,  // high overnight regulation prices, evening reserve peak
  Volatile,         // eight energy swings a day
};

/// One day of the given shape. Noise is drawn from `rng_state`, which is
/// advanced; identical states give identical days.
MarketDay synthetic_day(const Date& date, DayShape shape, std::uint64_t& rng_state);

/// A full calendar year mixing the shapes by season and weekday.
std::vector<MarketDay> synthetic_year(int year, std::uint64_t seed);

/// A full calendar year of RegulationNight days.
std::vector<MarketDay> regulation_year(int year, std::uint64_t seed);

/// Slow regulation signal: smooth swings with a period of tens of minutes.
std::vector<double> synthetic_rega(double hours, std::uint64_t seed, double cadence_s = 2.0);
/// Fast regulation signal with zero mean over every 15-minute block (up to
/// clipping at +-1).
std::vector<double> synthetic_regd(double hours, std::uint64_t seed, double cadence_s = 2.0);

}  // namespace bess
