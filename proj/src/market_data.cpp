#include "bess/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "bess/error.hpp"
#include "csv.hpp"

namespace bess {

namespace fs = std::filesystem;

namespace {

template <typename Day>
auto& select(Day& day, SeriesField field) {
  switch (field) {
    case SeriesField::Energy: return day.price_energy;
    case SeriesField::RegCap: return day.price_reg_cap;
    case SeriesField::RegPerf: return day.price_reg_perf;
    case SeriesField::Reserve: return day.price_res;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown series field");
}

// Reads an hourly file; one series per column after `hour`.
std::vector<HourlySeries> read_hourly(const fs::path& file, const std::vector<std::string>& header) {
  const auto table = detail::read_csv(file, header);
  if (table.size() != kHoursPerDay) {
    throw Error(ErrorCode::MalformedFile, file.string() + ": expected 24 data rows, found " +
                                              std::to_string(table.size()));
  }
  std::vector<HourlySeries> out(header.size() - 1);
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table[r];
    const double hour = detail::parse_number(row[0], file, r + 2);
    if (hour != static_cast<double>(r + 1)) {
      throw Error(ErrorCode::MalformedFile,
                  file.string() + ": hour column must run 1..24 ascending (line " +
                      std::to_string(r + 2) + ")");
    }
    for (std::size_t c = 1; c < row.size(); ++c) {
      out[c - 1][r] = detail::parse_number(row[c], file, r + 2);
    }
  }
  return out;
}

void check_finite(const HourlySeries& s, const char* name) {
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (!std::isfinite(s[t])) {
      throw Error(ErrorCode::NonFiniteValue,
                  std::string(name) + " price at hour " + std::to_string(t + 1) + " is not finite");
    }
  }
}

void check_non_negative(const HourlySeries& s, const char* name) {
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (s[t] < 0.0) {
      throw Error(ErrorCode::NegativeAncillaryPrice,
                  std::string(name) + " price at hour " + std::to_string(t + 1) + " is negative");
    }
  }
}

}  // namespace

void validate(const MarketDay& day) {
  check_finite(day.price_energy, "energy");
  check_finite(day.price_reg_cap, "regulation capacity");
  check_finite(day.price_reg_perf, "regulation performance");
  check_finite(day.price_res, "reserve");
  check_non_negative(day.price_reg_cap, "regulation capacity");
  check_non_negative(day.price_reg_perf, "regulation performance");
  check_non_negative(day.price_res, "reserve");
}

RegSignal::RegSignal(std::vector<double> samples, double cadence_s)
    : samples_(std::move(samples)), cadence_s_(cadence_s) {
  if (!(cadence_s_ > 0.0) || !std::isfinite(cadence_s_)) {
    throw Error(ErrorCode::DomainError, "signal cadence must be positive");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double s = samples_[i];
    if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
      throw Error(ErrorCode::DomainError,
                  "signal sample " + std::to_string(i) + " outside [-1, 1]");
    }
  }
}

MarketDay load_market_day(const fs::path& energy_file, const fs::path& reg_file,
                          const fs::path& res_file, const Date& date) {
  MarketDay day;
  day.date = date;
  day.price_energy = read_hourly(energy_file, {"hour", "price"})[0];
  const auto reg = read_hourly(reg_file, {"hour", "cap_price", "perf_price"});
  day.price_reg_cap = reg[0];
  day.price_reg_perf = reg[1];
  day.price_res = read_hourly(res_file, {"hour", "price"})[0];
  validate(day);
  return day;
}

MarketDay load_market_day(const fs::path& root, const Date& date) {
  const fs::path dir = root / format_date(date);
  return load_market_day(dir / "energy.csv", dir / "reg.csv", dir / "res.csv", date);
}

std::vector<MarketDay> load_year(const fs::path& root, int year) {
  std::vector<MarketDay> days;
  Date d{std::chrono::year{year}, std::chrono::January, std::chrono::day{1}};
  for (int i = 0; i < days_in_year(year); ++i, d = next_day(d)) {
    if (!fs::is_directory(root / format_date(d))) {
      throw Error(ErrorCode::MissingData, "no price data for " + format_date(d) + " under " +
                                              root.string());
    }
    days.push_back(load_market_day(root, d));
  }
  return days;
}

void write_market_day(const MarketDay& day, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "energy.csv", std::ios::binary);
    out << "hour,price\n";
    for (int t = 0; t < kHoursPerDay; ++t) {
      out << t + 1 << ',' << detail::format_number(day.price_energy[t]) << '\n';
    }
  }
  {
    std::ofstream out(dir / "reg.csv", std::ios::binary);
    out << "hour,cap_price,perf_price\n";
    for (int t = 0; t < kHoursPerDay; ++t) {
      out << t + 1 << ',' << detail::format_number(day.price_reg_cap[t]) << ','
          << detail::format_number(day.price_reg_perf[t]) << '\n';
    }
  }
  {
    std::ofstream out(dir / "res.csv", std::ios::binary);
    out << "hour,price\n";
    for (int t = 0; t < kHoursPerDay; ++t) {
      out << t + 1 << ',' << detail::format_number(day.price_res[t]) << '\n';
    }
  }
}

RegSignal load_reg_signal(const fs::path& file, double cadence_s) {
  const auto table = detail::read_csv(file, {"index", "value"});
  std::vector<double> samples;
  samples.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    const double index = detail::parse_number(table[r][0], file, r + 2);
    if (index != static_cast<double>(r)) {
      throw Error(ErrorCode::MalformedFile,
                  file.string() + ": index column must run 0,1,2,... (line " +
                      std::to_string(r + 2) + ")");
    }
    const double v = detail::parse_number(table[r][1], file, r + 2);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue, file.string() + ": non-finite sample at line " +
                                                 std::to_string(r + 2));
    }
    samples.push_back(v);
  }
  return RegSignal(std::move(samples), cadence_s);
}

void write_reg_signal(const RegSignal& signal, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  out << "index,value\n";
  const auto s = signal.samples();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << i << ',' << detail::format_number(s[i]) << '\n';
  }
}

double mileage(const RegSignal& signal) {
  const auto s = signal.samples();
  if (s.size() < 2) {
    throw Error(ErrorCode::TooShort, "mileage needs at least 2 samples");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) total += std::abs(s[i] - s[i - 1]);
  return total;
}

double mileage_ratio(const RegSignal& rega, const RegSignal& regd) {
  if (rega.duration_s() != regd.duration_s()) {
    throw Error(ErrorCode::SpanMismatch, "RegA and RegD cover different time spans");
  }
  const double a = mileage(rega);
  if (a == 0.0) {
    throw Error(ErrorCode::DivisionByZeroMileage, "RegA mileage is zero");
  }
  return mileage(regd) / a;
}

double reg_energy_rate(const RegSignal& regd) {
  const double per_hour = 3600.0 / regd.cadence_s();
  const auto samples_per_hour = static_cast<std::size_t>(std::llround(per_hour));
  if (std::abs(per_hour - static_cast<double>(samples_per_hour)) > 1e-9 || samples_per_hour == 0) {
    throw Error(ErrorCode::DomainError, "signal cadence must divide one hour");
  }
  const auto s = regd.samples();
  if (s.size() < samples_per_hour) {
    throw Error(ErrorCode::TooShort, "signal spans less than one hour");
  }
  if (s.size() % samples_per_hour != 0) {
    throw Error(ErrorCode::DomainError, "signal does not cover a whole number of hours");
  }
  const std::size_t hours = s.size() / samples_per_hour;
  const double dt_h = regd.cadence_s() / 3600.0;
  double total = 0.0;
  for (std::size_t h = 0; h < hours; ++h) {
    double hour_abs = 0.0;
    for (std::size_t i = h * samples_per_hour; i < (h + 1) * samples_per_hour; ++i) {
      hour_abs += std::abs(s[i]);
    }
    total += 0.5 * hour_abs * dt_h;
  }
  return total / static_cast<double>(hours);
}

MarketDay shift_series(const MarketDay& day, SeriesField field, int hours) {
  if (hours <= -kHoursPerDay || hours >= kHoursPerDay) {
    throw Error(ErrorCode::InvalidArgument, "shift must satisfy |hours| < 24");
  }
  MarketDay out = day;
  const HourlySeries& src = select(day, field);
  HourlySeries& dst = select(out, field);
  for (int t = 0; t < kHoursPerDay; ++t) {
    dst[static_cast<std::size_t>((t + hours + kHoursPerDay) % kHoursPerDay)] = src[t];
  }
  return out;
}

}  // namespace bess
