#include "bess/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "bess/error.hpp"

namespace bess {

namespace {

int parse_field(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, "bad date '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw Error(ErrorCode::InvalidArgument,
                "bad date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  const int y = parse_field(text.substr(0, 4), text);
  const int m = parse_field(text.substr(5, 2), text);
  const int d = parse_field(text.substr(8, 2), text);
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) {
    throw Error(ErrorCode::InvalidArgument, "no such date '" + std::string(text) + "'");
  }
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

bool is_weekend(const Date& date) {
  const std::chrono::weekday wd{std::chrono::sys_days{date}};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

int days_in_month(int year, unsigned month) {
  using namespace std::chrono;
  const year_month_day_last last{std::chrono::year{year}, month_day_last{std::chrono::month{month}}};
  return static_cast<int>(static_cast<unsigned>(last.day()));
}

int days_in_year(int year) { return std::chrono::year{year}.is_leap() ? 366 : 365; }

Date next_day(const Date& date) {
  return Date{std::chrono::sys_days{date} + std::chrono::days{1}};
}

}  // namespace bess
