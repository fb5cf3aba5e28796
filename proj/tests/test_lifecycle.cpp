#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bess/lifecycle.hpp"
#include "bess/synthetic.hpp"
#include "support/fixtures.hpp"

using namespace bess;
using bess::testing::error_of;

namespace {

DayContribution contribution(double income, double cost_op, double cap_loss) {
  DayContribution c;
  c.income = income;
  c.cost_op = cost_op;
  c.cap_loss = cap_loss;
  c.cost_loss = 1000 * cap_loss;
  c.energy_out = income / 50;
  c.energy_in = income / 60;
  c.energy_cost = income / 3;
  return c;
}

LedgerRow annual_loss(double loss) {
  LedgerRow r;
  r.year = 1;
  r.income = 1e6;
  r.cost_op = 1e5;
  r.cap_loss = loss;
  return r;
}

std::vector<MarketDay> flat_year(int year, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<MarketDay> days;
  Date d{std::chrono::year{year}, std::chrono::January, std::chrono::day{1}};
  for (int i = 0; i < days_in_year(year); ++i, d = next_day(d)) {
    MarketDay m;
    m.date = d;
    for (int t = 0; t < 24; ++t) {
      m.price_energy[t] = 30 + testing::uniform(rng, -2, 2);
      m.price_reg_cap[t] = 8;
      m.price_reg_perf[t] = 0.5;
      m.price_res[t] = 3;
    }
    days.push_back(m);
  }
  return days;
}

}  // namespace

TEST_SUITE("lifecycle") {
  TEST_CASE("typical days of 2021") {
    const auto set = calendar_typical_days(2021);
    REQUIRE(set.dates.size() == 36);
    CHECK(set.scale_factor == 10);
    for (const char* festival : {"2021-07-04", "2021-11-01", "2021-12-25"})
      CHECK(std::count(set.dates.begin(), set.dates.end(), parse_date(festival)) == 1);
    CHECK(std::is_sorted(set.dates.begin(), set.dates.end()));
  }

  TEST_CASE("every year has 24 weekday and 12 weekend or festival slots") {
    for (int year = 2015; year <= 2035; ++year) {
      const auto set = calendar_typical_days(year);
      REQUIRE(set.dates.size() == 36);
      int weekday = 0, other = 0;
      for (int m = 1; m <= 12; ++m) {
        int in_month = 0;
        for (const auto& d : set.dates) in_month += static_cast<unsigned>(d.month()) == static_cast<unsigned>(m);
        CHECK(in_month == 3);
      }
      for (const auto& d : set.dates) {
        const bool festival = (d.month() == std::chrono::July && d.day() == std::chrono::day{4}) ||
                              (d.month() == std::chrono::November && d.day() == std::chrono::day{1}) ||
                              (d.month() == std::chrono::December && d.day() == std::chrono::day{25});
        (is_weekend(d) || festival ? other : weekday)++;
      }
      // A festival can fall on a weekend and then replaces a weekday slot.
      CHECK(weekday + other == 36);
      CHECK(weekday >= 21);
      CHECK(other <= 15);
      CHECK(other >= 12);
    }
  }

  TEST_CASE("2021 slots by hand") {
    // March 2021: the 1st is a Monday, the 13th a Saturday, the 22nd a Monday.
    const auto set = calendar_typical_days(2021);
    CHECK(set.dates[6] == parse_date("2021-03-01"));
    CHECK(set.dates[7] == parse_date("2021-03-13"));
    CHECK(set.dates[8] == parse_date("2021-03-22"));
  }

  TEST_CASE("an extreme day is swapped for the next eligible one, once per month") {
    auto days = flat_year(2021, 3);
    const auto plain = select_typical_days(days);
    CHECK(plain.dates == calendar_typical_days(2021).dates);

    // 2021-03-01 is the first March slot; make it extreme.
    days[31 + 28].price_energy.fill(1000);
    const auto swapped = select_typical_days(days);
    int changes = 0;
    for (std::size_t i = 0; i < 36; ++i) changes += swapped.dates[i] != plain.dates[i];
    CHECK(changes == 1);
    CHECK(swapped.dates[6] == parse_date("2021-03-02"));

    // Festivals are kept regardless of their prices.
    days[31 + 28 + 31 + 30 + 31 + 30 + 3].price_energy.fill(1000);  // July 4
    const auto festival = select_typical_days(days);
    CHECK(std::count(festival.dates.begin(), festival.dates.end(), parse_date("2021-07-04")) == 1);
  }

  TEST_CASE("typical accumulation examples") {
    const LedgerRow start{3, 10, 20, 0.1, 5, 1, 2, 3};
    const std::vector<DayContribution> zeros(36);
    auto same = accumulate_typical(start, zeros);
    CHECK(same.year == 4);
    same.year = 3;
    CHECK(same == start);

    std::vector<DayContribution> hundred(36);
    for (auto& c : hundred) c.income = 100;
    CHECK(accumulate_typical(start, hundred).income - start.income == doctest::Approx(36000));

    CHECK(error_of([&] { accumulate_typical(start, std::span(zeros).first(35)); }) == ErrorCode::WrongCount);
  }

  TEST_CASE("typical accumulation re-sums a mixed fixture") {
    std::vector<DayContribution> days;
    double income = 0, cost = 0, loss = 0, out = 0;
    for (int i = 0; i < 36; ++i) {
      days.push_back(contribution(100 + 37 * i, 10 + i, 1e-5 * (i % 7)));
      income += days.back().income;
      cost += days.back().cost_op;
      loss += days.back().cap_loss;
      out += days.back().energy_out;
    }
    const auto row = accumulate_typical({}, days);
    CHECK(row.income == doctest::Approx(10 * income));
    CHECK(row.cost_op == doctest::Approx(10 * cost));
    CHECK(row.cap_loss == doctest::Approx(10 * loss));
    CHECK(row.energy_out == doctest::Approx(10 * out));
  }

  TEST_CASE("cluster accumulation examples") {
    const std::vector<DayContribution> one{contribution(50, 5, 2e-5)};
    const std::vector<int> all{365};
    CHECK(accumulate_cluster({}, one, all, 365).cap_loss == doctest::Approx(365 * 2e-5));

    const std::vector<DayContribution> two{contribution(10, 1, 3e-5), contribution(20, 2, 7e-5)};
    const std::vector<int> counts{100, 265};
    const auto row = accumulate_cluster({}, two, counts, 365);
    CHECK(row.cap_loss == doctest::Approx(100 * 3e-5 + 265 * 7e-5));
    CHECK(row.income == doctest::Approx(100 * 10 + 265 * 20));

    const std::vector<int> wrong{100, 264};
    CHECK(error_of([&] { accumulate_cluster({}, two, wrong, 365); }) == ErrorCode::CountMismatch);
    const std::vector<int> leap{100, 266};
    CHECK_NOTHROW(accumulate_cluster({}, two, leap, 366));
    const std::vector<int> three{100, 200, 65};
    CHECK(error_of([&] { accumulate_cluster({}, two, three, 365); }) == ErrorCode::CountMismatch);
  }

  TEST_CASE("cluster accumulation re-sums a five-cluster fixture") {
    std::vector<DayContribution> cl;
    const std::vector<int> counts{91, 40, 120, 77, 37};
    double income = 0, loss = 0, cost_loss = 0;
    for (int i = 0; i < 5; ++i) {
      cl.push_back(contribution(1000 + 311 * i, 110 + i, 1e-5 * (i + 1)));
      income += counts[i] * cl.back().income;
      loss += counts[i] * cl.back().cap_loss;
      cost_loss += counts[i] * cl.back().cost_loss;
    }
    const auto row = accumulate_cluster({}, cl, counts, 365);
    CHECK(row.income == doctest::Approx(income));
    CHECK(row.cap_loss == doctest::Approx(loss));
    CHECK(row.cost_loss == doctest::Approx(cost_loss));
  }

  TEST_CASE("constant 2% per year ends in year 10") {
    LifecycleConfig cfg;
    const auto ledger = project_ledger(annual_loss(0.02), LifecycleMethod::Cluster, cfg);
    CHECK(ledger.end_of_life_year == 10);
    CHECK(ledger.rows.size() == 10);
    CHECK(ledger.rows.back().income == doctest::Approx(1e7));
  }

  TEST_CASE("60% floor with tripled fade beyond 80% ends in year 14") {
    LifecycleConfig cfg;
    cfg.threshold = 0.40;
    cfg.accelerated_fade = true;
    const auto ledger = project_ledger(annual_loss(0.02), LifecycleMethod::Cluster, cfg);
    CHECK(ledger.end_of_life_year == 10 + static_cast<int>(std::ceil(20.0 / (3 * 2))));
    CHECK(ledger.rows[10].cap_loss == doctest::Approx(0.26));
  }

  TEST_CASE("a battery that never wears out is reported") {
    LifecycleConfig cfg;
    CHECK(error_of([&] { project_ledger(annual_loss(0.0), LifecycleMethod::Typical, cfg); }) ==
          ErrorCode::NeverDies);
    CHECK(error_of([&] { project_ledger(annual_loss(0.001), LifecycleMethod::Typical, cfg); }) ==
          ErrorCode::NeverDies);
  }

  TEST_CASE("config validation") {
    LifecycleConfig cfg;
    cfg.k = 0;
    CHECK(error_of([&] { cfg.validate(); }) == ErrorCode::InvalidConfig);
    cfg = {};
    cfg.threshold = 1.5;
    CHECK(error_of([&] { cfg.validate(); }) == ErrorCode::InvalidConfig);
    CHECK(parse_method("typical") == LifecycleMethod::Typical);
    CHECK(error_of([] { parse_method("monthly"); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("run_lifecycle rejects a partial year") {
    auto days = synthetic_year(2021, 11);
    days.erase(days.begin() + 100);
    auto b = case_study_battery();
    b.cost_bat_unit = 1509091;
    CHECK(error_of([&] { run_lifecycle(days, b, lfp_degradation(), {}); }) == ErrorCode::MissingData);
  }
}

TEST_SUITE("lifecycle_properties") {
  TEST_CASE("accumulation does not depend on order") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<DayContribution> days;
      for (int i = 0; i < 36; ++i)
        days.push_back(contribution(testing::uniform(rng, 0, 5000), testing::uniform(rng, 0, 300),
                                    testing::uniform(rng, 0, 1e-4)));
      const auto a = accumulate_typical({}, days);
      std::shuffle(days.begin(), days.end(), rng);
      const auto b = accumulate_typical({}, days);
      CHECK(a.income == doctest::Approx(b.income).epsilon(1e-12));
      CHECK(a.cap_loss == doctest::Approx(b.cap_loss).epsilon(1e-12));

      std::vector<int> counts(5, 73);
      std::vector<DayContribution> five(days.begin(), days.begin() + 5);
      const auto c = accumulate_cluster({}, five, counts, 365);
      std::reverse(five.begin(), five.end());
      const auto d = accumulate_cluster({}, five, counts, 365);
      CHECK(c.cost_op == doctest::Approx(d.cost_op).epsilon(1e-12));
    }
  }

  TEST_CASE("cumulative loss strictly increases and stops at the threshold") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
      LifecycleConfig cfg;
      cfg.threshold = testing::uniform(rng, 0.05, 0.5);
      cfg.accelerated_fade = trial % 2 == 0;
      const double loss = testing::uniform(rng, 0.01, 0.1);
      const auto ledger = project_ledger(annual_loss(loss), LifecycleMethod::Cluster, cfg);
      for (std::size_t i = 1; i < ledger.rows.size(); ++i) {
        CHECK(ledger.rows[i].cap_loss > ledger.rows[i - 1].cap_loss);
        CHECK(ledger.rows[i].year == ledger.rows[i - 1].year + 1);
      }
      CHECK(ledger.rows.back().cap_loss >= cfg.threshold - 1e-12);
      if (ledger.rows.size() > 1) CHECK(ledger.rows[ledger.rows.size() - 2].cap_loss < cfg.threshold - 1e-12);
      CHECK(ledger.end_of_life_year == static_cast<int>(ledger.rows.size()));
    }
  }

  TEST_CASE("runs are bit-reproducible and land in a plausible lifetime band") {
    const auto days = synthetic_year(2021, 11);
    auto b = case_study_battery();
    b.cost_bat_unit = 1509091;
    for (auto method : {LifecycleMethod::Cluster, LifecycleMethod::Typical}) {
      LifecycleConfig cfg;
      cfg.method = method;
      const auto a = run_lifecycle(days, b, lfp_degradation(), cfg);
      const auto c = run_lifecycle(days, b, lfp_degradation(), cfg);
      CHECK(a.ledger.rows == c.ledger.rows);
      CHECK(a.ledger.end_of_life_year >= 8);
      CHECK(a.ledger.end_of_life_year <= 20);
      int total = 0;
      for (int w : a.weights) total += w;
      CHECK(total == (method == LifecycleMethod::Cluster ? 365 : 360));
    }
  }
}
