#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>

#include "bess/error.hpp"
#include "bess/market_data.hpp"
#include "support/fixtures.hpp"

using namespace bess;
using bess::testing::TempDir;
using bess::testing::error_of;

namespace {

void write_lines(const std::filesystem::path& p, const std::string& header, int rows,
                 const std::function<std::string(int)>& row) {
  std::ofstream out(p);
  out << header << "\n";
  for (int h = 1; h <= rows; ++h) out << row(h) << "\n";
}

// Written from scratch, line by line, so the loader is checked against the
// documented layout rather than against its own writer.
std::filesystem::path write_day(const TempDir& dir, int energy_rows = 24, double res_value = 2.0) {
  write_lines(dir / "energy.csv", "hour,price", energy_rows,
              [](int h) { return std::to_string(h) + "," + std::to_string(20 + h); });
  write_lines(dir / "reg.csv", "hour,cap_price,perf_price", 24,
              [](int h) { return std::to_string(h) + "," + std::to_string(h) + ".5,0.25"; });
  write_lines(dir / "res.csv", "hour,price", 24, [&](int h) {
    return std::to_string(h) + "," + (h == 7 ? std::to_string(res_value) : std::string("3"));
  });
  return dir.path();
}

}  // namespace

TEST_SUITE("market_data") {
  TEST_CASE("well formed files load into 4x24 finite prices") {
    TempDir dir;
    write_day(dir);
    const auto day = load_market_day(dir / "energy.csv", dir / "reg.csv", dir / "res.csv",
                                     parse_date("2021-05-01"));
    CHECK(day.price_energy[0] == 21.0);
    CHECK(day.price_energy[23] == 44.0);
    CHECK(day.price_reg_cap[4] == 5.5);
    CHECK(day.price_reg_perf[10] == 0.25);
    CHECK(day.price_res[6] == 2.0);
    for (const auto* s : {&day.price_energy, &day.price_reg_cap, &day.price_reg_perf, &day.price_res})
      for (double v : *s) CHECK(std::isfinite(v));
  }

  TEST_CASE("a 23-row energy file is malformed") {
    TempDir dir;
    write_day(dir, 23);
    CHECK(error_of([&] {
            load_market_day(dir / "energy.csv", dir / "reg.csv", dir / "res.csv", parse_date("2021-05-01"));
          }) == ErrorCode::MalformedFile);
  }

  TEST_CASE("negative reserve price is rejected") {
    TempDir dir;
    write_day(dir, 24, -1.0);
    CHECK(error_of([&] {
            load_market_day(dir / "energy.csv", dir / "reg.csv", dir / "res.csv", parse_date("2021-05-01"));
          }) == ErrorCode::NegativeAncillaryPrice);
  }

  TEST_CASE("non-finite values and wrong headers are rejected") {
    TempDir dir;
    write_day(dir);
    write_lines(dir / "energy.csv", "hour,price", 24,
                [](int h) { return std::to_string(h) + "," + (h == 3 ? "nan" : "10"); });
    CHECK(error_of([&] {
            load_market_day(dir / "energy.csv", dir / "reg.csv", dir / "res.csv", parse_date("2021-05-01"));
          }) == ErrorCode::NonFiniteValue);
    write_lines(dir / "energy.csv", "hour,lmp", 24, [](int h) { return std::to_string(h) + ",10"; });
    CHECK(error_of([&] {
            load_market_day(dir / "energy.csv", dir / "reg.csv", dir / "res.csv", parse_date("2021-05-01"));
          }) == ErrorCode::MalformedFile);
  }

  TEST_CASE("hours must run 1..24 in order") {
    TempDir dir;
    write_day(dir);
    write_lines(dir / "res.csv", "hour,price", 24,
                [](int h) { return std::to_string(h == 5 ? 6 : h) + ",1"; });
    CHECK(error_of([&] {
            load_market_day(dir / "energy.csv", dir / "reg.csv", dir / "res.csv", parse_date("2021-05-01"));
          }) == ErrorCode::MalformedFile);
  }

  TEST_CASE("negative energy prices are allowed") {
    std::mt19937_64 rng(3);
    auto day = testing::random_day(rng, parse_date("2021-01-01"));
    day.price_energy[3] = -50.0;
    CHECK_NOTHROW(validate(day));
    day.price_reg_perf[3] = -0.01;
    CHECK(error_of([&] { validate(day); }) == ErrorCode::NegativeAncillaryPrice);
  }

  TEST_CASE("write then load round-trips bit-exactly") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
      TempDir dir;
      const auto day = testing::random_day(rng, parse_date("2021-03-14"));
      write_market_day(day, dir / format_date(day.date));
      CHECK(load_market_day(dir.path(), day.date) == day);
    }
  }

  TEST_CASE("load_year reports the first missing day") {
    TempDir dir;
    std::mt19937_64 rng(1);
    Date d = parse_date("2021-01-01");
    for (int i = 0; i < 40; ++i, d = next_day(d)) {
      write_market_day(testing::random_day(rng, d), dir / format_date(d));
    }
    CHECK(error_of([&] { load_year(dir.path(), 2021); }) == ErrorCode::MissingData);
  }

  TEST_CASE("mileage examples") {
    CHECK(mileage(RegSignal({0.0, 0.5, -0.5, 0.0})) == doctest::Approx(2.0));
    CHECK(mileage(RegSignal(std::vector<double>(500, 0.3))) == 0.0);
    CHECK(error_of([] { mileage(RegSignal({0.2})); }) == ErrorCode::TooShort);
  }

  TEST_CASE("signal samples outside [-1, 1] are rejected") {
    CHECK(error_of([] { RegSignal({0.0, 1.5}); }) == ErrorCode::DomainError);
  }

  TEST_CASE("mileage of the bundled RegD fixture matches direct re-summation") {
    const auto signal = load_reg_signal(BESS_FIXTURE_DIR "/regd.csv");
    std::ifstream in(BESS_FIXTURE_DIR "/regd.csv");
    std::string line;
    std::getline(in, line);
    double prev = 0.0, total = 0.0;
    bool first = true;
    while (std::getline(in, line)) {
      const double v = std::stod(line.substr(line.find(',') + 1));
      if (!first) total += std::fabs(v - prev);
      prev = v;
      first = false;
    }
    CHECK(mileage(signal) == doctest::Approx(total).epsilon(1e-12));
  }

  TEST_CASE("mileage ratio examples") {
    const std::vector<double> a{0.0, 0.2, -0.1, 0.3, 0.0, -0.4};
    std::vector<double> twice;
    for (double v : a) twice.push_back(2.0 * v);
    CHECK(mileage_ratio(RegSignal(a), RegSignal(a)) == doctest::Approx(1.0));
    CHECK(mileage_ratio(RegSignal(a), RegSignal(twice)) == doctest::Approx(2.0));
    CHECK(error_of([&] { mileage_ratio(RegSignal(std::vector<double>(6, 0.1)), RegSignal(a)); }) ==
          ErrorCode::DivisionByZeroMileage);
    CHECK(error_of([&] { mileage_ratio(RegSignal(a), RegSignal({0.0, 0.1})); }) == ErrorCode::SpanMismatch);
  }

  TEST_CASE("bundled RegD moves faster than RegA") {
    const auto rega = load_reg_signal(BESS_FIXTURE_DIR "/rega.csv");
    const auto regd = load_reg_signal(BESS_FIXTURE_DIR "/regd.csv");
    CHECK(mileage_ratio(rega, regd) > 1.0);
  }

  TEST_CASE("reg_energy_rate examples") {
    CHECK(reg_energy_rate(RegSignal(std::vector<double>(1800, 0.0))) == 0.0);
    CHECK(reg_energy_rate(RegSignal(std::vector<double>(1800, 1.0))) == doctest::Approx(0.5));
    CHECK(error_of([] { reg_energy_rate(RegSignal(std::vector<double>(100, 1.0))); }) == ErrorCode::TooShort);
  }

  TEST_CASE("reg_energy_rate of the fixture matches numeric integration") {
    const auto s = load_reg_signal(BESS_FIXTURE_DIR "/regd.csv");
    double integral = 0.0;
    for (double v : s.samples()) integral += std::fabs(v) * 2.0;
    const double hours = s.duration_s() / 3600.0;
    CHECK(reg_energy_rate(s) == doctest::Approx(0.5 * integral / 3600.0 / hours).epsilon(1e-12));
  }

  TEST_CASE("shift_series examples") {
    std::mt19937_64 rng(5);
    auto day = testing::random_day(rng, parse_date("2021-07-01"));
    CHECK(shift_series(day, SeriesField::Reserve, 0) == day);
    CHECK(shift_series(shift_series(day, SeriesField::Energy, 4), SeriesField::Energy, -4) == day);
    CHECK_THROWS_AS(shift_series(day, SeriesField::Reserve, 24), Error);
    std::iota(day.price_res.begin(), day.price_res.end(), 1.0);
    const auto shifted = shift_series(day, SeriesField::Reserve, 4);
    const HourlySeries expect{21, 22, 23, 24, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
    CHECK(shifted.price_res == expect);
    CHECK(shifted.price_energy == day.price_energy);
  }
}

TEST_SUITE("market_data_properties") {
  TEST_CASE("mileage is additive over concatenation sharing a boundary sample") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 50), m = 2 + static_cast<int>(rng() % 50);
      std::vector<double> a(n), b(m);
      for (double& v : a) v = testing::uniform(rng, -1, 1);
      for (double& v : b) v = testing::uniform(rng, -1, 1);
      b.front() = a.back();
      std::vector<double> ab = a;
      ab.insert(ab.end(), b.begin() + 1, b.end());
      CHECK(mileage(RegSignal(ab)) == doctest::Approx(mileage(RegSignal(a)) + mileage(RegSignal(b))));
    }
  }

  TEST_CASE("mileage ratio of a signal with itself is one; energy rate ignores sign") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> s(1800), neg(1800);
      for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = testing::uniform(rng, -1, 1);
        neg[i] = -s[i];
      }
      CHECK(mileage_ratio(RegSignal(s), RegSignal(s)) == 1.0);
      CHECK(reg_energy_rate(RegSignal(s)) == reg_energy_rate(RegSignal(neg)));
    }
  }
}
