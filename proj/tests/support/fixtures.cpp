#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <unistd.h>

#include "bess/synthetic.hpp"

namespace bess::testing {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

MarketDay random_day(std::mt19937_64& rng, const Date& date) {
  MarketDay d;
  d.date = date;
  const double base = uniform(rng, 15.0, 45.0);
  const double swing = uniform(rng, 0.0, 60.0);
  for (int t = 0; t < kHoursPerDay; ++t) {
    d.price_energy[t] = base + swing * std::sin(0.26 * t + uniform(rng, -0.5, 0.5)) +
                        uniform(rng, -10.0, 10.0);
    d.price_reg_cap[t] = uniform(rng, 0.0, 25.0);
    d.price_reg_perf[t] = uniform(rng, 0.0, 3.0);
    d.price_res[t] = uniform(rng, 0.0, 15.0);
  }
  return d;
}

ToyDay random_toy_day(std::mt19937_64& rng, std::size_t hours) {
  ToyDay d(hours);
  for (std::size_t t = 0; t < hours; ++t) {
    d.energy[t] = uniform(rng, -20.0, 80.0);
    d.reg_cap[t] = uniform(rng, 0.0, 20.0);
    d.reg_perf[t] = uniform(rng, 0.0, 2.0);
    d.res[t] = uniform(rng, 0.0, 20.0);
  }
  return d;
}

namespace {

struct Bid {
  double ch, dch, reg, res;
};

std::vector<Bid> hourly_bids(double P) {
  const std::array<double, 3> levels{0.0, 0.5 * P, P};
  std::vector<Bid> bids;
  for (double ch : levels)
    for (double dch : levels)
      for (double reg : levels)
        for (double res : levels) {
          if (ch > 0.0 && dch > 0.0) continue;
          if (dch + reg + res > P || ch + reg > P) continue;
          bids.push_back({ch, dch, reg, res});
        }
  return bids;
}

}  // namespace

BatteryParams brute_force_battery() {
  BatteryParams b = case_study_battery();
  b.eff_ch = b.eff_dch = 1.0;
  b.r_self = 0.0;
  b.prob_res = 0.0;
  b.E_min = 5.0;  // a half-power discharge must fit inside the end-of-hour SoC
  b.cost_bat_unit = 1509091;
  return b;
}

BruteForce brute_force_dispatch(const ToyDay& day, const BatteryParams& b, double n_100) {
  const auto bids = hourly_bids(b.P_r);
  const std::size_t H = day.hours();
  const double tol = 1e-9;
  BruteForce out;
  std::function<void(std::size_t, double, double)> visit = [&](std::size_t t, double e_prev,
                                                                double value) {
    if (t == H) {
      if (std::abs(e_prev - b.E_min) > tol) return;
      const double total = value - b.k_fix * b.P_r;
      if (!out.feasible || total > out.best) out.best = total;
      out.feasible = true;
      ++out.schedules;
      return;
    }
    for (const Bid& x : bids) {
      const double net = x.ch * b.eff_ch - x.dch / b.eff_dch - x.res * b.prob_res / b.eff_dch -
                         (b.e_reg * x.reg / b.eff_dch - b.e_reg * x.reg * b.eff_ch);
      const double e = (1.0 - b.r_self) * e_prev + net;
      if (e < b.E_min - tol || e > b.E_max + tol) continue;
      if ((x.dch + x.res * b.t_res + x.reg * b.t_reg) / b.eff_dch > e + tol) continue;
      if (e + (x.ch + x.reg * b.t_reg) * b.eff_ch > b.E_max + tol) continue;
      const double pe = day.energy[t];
      double v = pe * (x.dch - x.ch) + (day.reg_cap[t] + day.reg_perf[t] * b.r_mileage) * b.score_perf * x.reg +
                 (day.res[t] + pe * b.prob_res) * x.res -
                 b.k_var * (x.ch + x.dch + b.prob_res * x.res + 2.0 * b.e_reg * x.reg) -
                 b.cost_bat_unit * std::abs(e - e_prev) / (2.0 * b.E_r * n_100);
      visit(t + 1, e, value + v);
    }
  };
  visit(0, b.E_min, 0.0);
  return out;
}

double max_violation(const DispatchSolution& s, const PriceHorizon& p, const BatteryParams& b) {
  double worst = 0.0;
  auto le = [&](double lhs, double rhs) {
    worst = std::max(worst, (lhs - rhs) / std::max(1.0, std::abs(rhs)));
  };
  auto eq = [&](double lhs, double rhs) {
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  };
  const double P = b.P_r;
  eq(s.soc.front(), b.E_min);
  eq(s.soc.back(), b.E_min);
  for (std::size_t t = 0; t < p.hours(); ++t) {
    const double ch = s.cap_ch[t], dch = s.cap_dch[t], reg = s.cap_reg[t], res = s.cap_res[t];
    const double e = s.soc[t + 1], e_prev = s.soc[t];
    for (double x : {ch, dch, reg, res}) {
      le(-x, 0.0);
      le(x, P);
    }
    le(dch + reg + res, P);
    le(ch + reg, P);
    le(b.E_min, e);
    le(e, b.E_max);
    le((dch + res * b.t_res + reg * b.t_reg) / b.eff_dch, e);
    le(e + (ch + reg * b.t_reg) * b.eff_ch, b.E_max);
    const double net = ch * b.eff_ch - dch / b.eff_dch - res * b.prob_res / b.eff_dch -
                       (b.e_reg * reg / b.eff_dch - b.e_reg * reg * b.eff_ch);
    eq(s.delta_e[t], net);
    eq(e, (1.0 - b.r_self) * e_prev + net);
    const int mode = s.mode_b[t];
    le(dch, P * (1 - mode));
    le(ch, P * mode);
  }
  return worst;
}

double objective_of(const DispatchSolution& s, const PriceHorizon& p, const BatteryParams& b,
                    double n_100) {
  double v = -b.k_fix * b.P_r;
  for (std::size_t t = 0; t < p.hours(); ++t) {
    const double pe = p.energy[t];
    v += pe * (s.cap_dch[t] - s.cap_ch[t]);
    v += (p.reg_cap[t] + p.reg_perf[t] * b.r_mileage) * b.score_perf * s.cap_reg[t];
    v += (p.res[t] + pe * b.prob_res) * s.cap_res[t];
    v -= b.k_var * (s.cap_ch[t] + s.cap_dch[t] + b.prob_res * s.cap_res[t] + 2.0 * b.e_reg * s.cap_reg[t]);
    v -= b.cost_bat_unit * std::abs(s.soc[t + 1] - s.soc[t]) / (2.0 * b.E_r * n_100);
  }
  return v;
}

std::vector<double> turning_point_depths(const std::vector<double>& soc, double rated_energy) {
  std::vector<double> x;
  for (double v : soc) {
    if (x.empty() || v != x.back()) x.push_back(v);
  }
  std::vector<double> extrema;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == 0 || i + 1 == x.size()) {
      extrema.push_back(x[i]);
      continue;
    }
    const bool peak = x[i] > x[i - 1] && x[i] > x[i + 1];
    const bool valley = x[i] < x[i - 1] && x[i] < x[i + 1];
    if (peak || valley) extrema.push_back(x[i]);
  }
  std::vector<double> depths;
  for (std::size_t i = 1; i < extrema.size(); ++i) {
    depths.push_back(std::abs(extrema[i] - extrema[i - 1]) / rated_energy);
  }
  return depths;
}

std::vector<MarketDay> planted_year(int year, std::uint64_t seed, std::vector<int>& labels) {
  std::mt19937_64 rng(seed);
  std::vector<MarketDay> days;
  labels.clear();
  Date d{std::chrono::year{year}, std::chrono::January, std::chrono::day{1}};
  for (int i = 0; i < days_in_year(year); ++i, d = next_day(d)) {
    const int shape = static_cast<int>(rng() % 3);
    MarketDay m;
    m.date = d;
    for (int t = 0; t < kHoursPerDay; ++t) {
      const double h = t;
      switch (shape) {
        case 0:  // morning energy peak, cheap ancillaries
          m.price_energy[t] = 25.0 + 60.0 * std::exp(-0.5 * std::pow((h - 8.0) / 1.5, 2));
          m.price_reg_cap[t] = 5.0;
          m.price_res[t] = 2.0;
          break;
        case 1:  // regulation at night, reserve in the evening
          m.price_energy[t] = 30.0;
          m.price_reg_cap[t] = (h < 6.0 || h > 21.0) ? 40.0 : 10.0;
          m.price_res[t] = (h >= 18.0 && h <= 21.0) ? 15.0 : 1.0;
          break;
        default:  // evening energy peak, midday regulation
          m.price_energy[t] = 20.0 + 70.0 * std::exp(-0.5 * std::pow((h - 19.0) / 1.5, 2));
          m.price_reg_cap[t] = (h >= 10.0 && h <= 15.0) ? 25.0 : 6.0;
          m.price_res[t] = 4.0;
          break;
      }
      m.price_energy[t] += uniform(rng, -1.0, 1.0);
      m.price_reg_cap[t] += uniform(rng, 0.0, 0.5);
      m.price_reg_perf[t] = uniform(rng, 0.0, 0.2);
      m.price_res[t] += uniform(rng, 0.0, 0.3);
    }
    days.push_back(m);
    labels.push_back(shape);
  }
  return days;
}

MarketDay regulation_night_day() {
  std::uint64_t state = 42;
  return synthetic_day(parse_date("2021-06-15"), DayShape::RegulationNight, state);
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("bess-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace bess::testing
