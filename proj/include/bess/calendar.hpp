#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace bess {

using Date = std::chrono::year_month_day;

/// Parses an ISO `YYYY-MM-DD` date. Throws Error(InvalidArgument) otherwise.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

bool is_weekend(const Date& date);
int days_in_month(int year, unsigned month);
int days_in_year(int year);
Date next_day(const Date& date);

}  // namespace bess
