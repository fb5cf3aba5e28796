#include "bess/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bess/error.hpp"

namespace bess {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// splitmix64: small, portable and fully specified.
std::uint64_t next(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform(std::uint64_t& s) { return static_cast<double>(next(s) >> 11) * 0x1.0p-53; }

// Symmetric noise in [-a, a].
double noise(std::uint64_t& s, double a) { return a * (2.0 * uniform(s) - 1.0); }

double bump(double h, double centre, double width) {
  const double x = (h - centre) / width;
  return std::exp(-0.5 * x * x);
}

}  // namespace

MarketDay synthetic_day(const Date& date, DayShape shape, std::uint64_t& s) {
  MarketDay d;
  d.date = date;
  const double level = noise(s, 3.0);
  for (int t = 0; t < kHoursPerDay; ++t) {
    const double h = t + 0.5;
    double e = 0.0, cap = 0.0, perf = 0.0, res = 0.0;
    switch (shape) {
      case DayShape::ArbitrageWinter:
        e = 20.0 + 60.0 * bump(h, 7.5, 1.2) + 50.0 * bump(h, 13.5, 1.2) + 75.0 * bump(h, 19.5, 1.2);
        cap = 2.5 + 1.5 * bump(h, 7.5, 2.0) + 1.5 * bump(h, 18.0, 2.0);
        perf = 0.6;
        res = 1.5 + 5.0 * bump(h, 18.5, 1.5);
        break;
      case DayShape::ArbitrageSummer:
        e = 20.0 + 50.0 * bump(h, 6.5, 1.2) + 45.0 * bump(h, 12.5, 1.2) + 90.0 * bump(h, 18.5, 1.3);
        cap = 3.0 + 2.0 * bump(h, 16.0, 3.0);
        perf = 0.8;
        res = 2.0 + 6.0 * bump(h, 17.0, 2.0);
        break;
      case DayShape::Weekend:
        e = 20.0 + 40.0 * bump(h, 9.0, 1.3) + 55.0 * bump(h, 19.0, 1.4);
        cap = 3.0 + 1.0 * bump(h, 19.0, 3.0);
        perf = 0.4;
        res = 1.0 + 1.5 * bump(h, 19.0, 2.0);
        break;
      case DayShape::RegulationNight: {
        const double night = bump(h, 2.5, 3.5) + bump(h, 26.5, 3.5);
        e = 30.0 + 6.0 * bump(h, 18.0, 2.5);
        cap = 14.0 + 30.0 * night;
        perf = 1.0 + 2.0 * night;
        res = 1.0 + 8.0 * bump(h, 20.0, 1.8);
        break;
      }
      case DayShape::Volatile:
        e = 45.0 + 55.0 * std::tanh(3.0 * std::sin(kTwoPi * (h - 1.0) / 4.0)) + 20.0 * bump(h, 18.0, 1.5);
        cap = 3.0 + 1.0 * std::cos(kTwoPi * h / 12.0);
        perf = 0.7;
        res = 2.0 + 4.0 * bump(h, 18.5, 1.5);
        break;
    }
    d.price_energy[t] = e + level + noise(s, 2.5);
    d.price_reg_cap[t] = std::max(0.0, cap + noise(s, 1.5));
    d.price_reg_perf[t] = std::max(0.0, perf + noise(s, 0.2));
    d.price_res[t] = std::max(0.0, res + noise(s, 0.5));
  }
  return d;
}

std::vector<MarketDay> synthetic_year(int y, std::uint64_t seed) {
  std::vector<MarketDay> days;
  std::uint64_t s = seed;
  Date d{std::chrono::year{y}, std::chrono::January, std::chrono::day{1}};
  for (int i = 0; i < days_in_year(y); ++i, d = next_day(d)) {
    const unsigned m = static_cast<unsigned>(d.month());
    const bool summer = m >= 5 && m <= 9;
    DayShape shape;
    const double u = uniform(s);
    if (is_weekend(d)) {
      shape = u < 0.15 ? DayShape::RegulationNight : u < 0.75 ? DayShape::Volatile : DayShape::Weekend;
    } else if (u < 0.08) {
      shape = DayShape::RegulationNight;
    } else if (u < 0.85) {
      shape = DayShape::Volatile;
    } else {
      shape = summer ? DayShape::ArbitrageSummer : DayShape::ArbitrageWinter;
    }
    days.push_back(synthetic_day(d, shape, s));
  }
  return days;
}

std::vector<MarketDay> regulation_year(int y, std::uint64_t seed) {
  std::vector<MarketDay> days;
  std::uint64_t s = seed;
  Date d{std::chrono::year{y}, std::chrono::January, std::chrono::day{1}};
  for (int i = 0; i < days_in_year(y); ++i, d = next_day(d)) {
    days.push_back(synthetic_day(d, DayShape::RegulationNight, s));
  }
  return days;
}

std::vector<double> synthetic_rega(double hours, std::uint64_t seed, double cadence_s) {
  if (!(hours > 0.0) || !(cadence_s > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "duration and cadence must be positive");
  }
  std::uint64_t s = seed;
  const auto n = static_cast<std::size_t>(std::llround(hours * 3600.0 / cadence_s));
  const double phase = kTwoPi * uniform(s);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * cadence_s;
    const double v = 0.6 * std::sin(kTwoPi * t / 1800.0 + phase) + 0.25 * std::sin(kTwoPi * t / 5400.0);
    out[i] = std::clamp(v, -1.0, 1.0);
  }
  return out;
}

std::vector<double> synthetic_regd(double hours, std::uint64_t seed, double cadence_s) {
  if (!(hours > 0.0) || !(cadence_s > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "duration and cadence must be positive");
  }
  std::uint64_t s = seed;
  const auto n = static_cast<std::size_t>(std::llround(hours * 3600.0 / cadence_s));
  const auto block = static_cast<std::size_t>(std::llround(900.0 / cadence_s));
  const double phase = kTwoPi * uniform(s);
  std::vector<double> out(n);
  double x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * cadence_s;
    x = 0.9 * x + noise(s, 0.01);
    out[i] = 0.5 * std::sin(kTwoPi * t / 600.0 + phase) + x;
  }
  // Remove each block's mean so the signal is energy neutral per block.
  for (std::size_t b = 0; b < n; b += block) {
    const std::size_t e = std::min(n, b + block);
    double mean = 0.0;
    for (std::size_t i = b; i < e; ++i) mean += out[i];
    mean /= static_cast<double>(e - b);
    for (std::size_t i = b; i < e; ++i) out[i] = std::clamp(out[i] - mean, -1.0, 1.0);
  }
  return out;
}

}  // namespace bess
