#include "bess/lifecycle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bess/error.hpp"

namespace bess {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;

constexpr double kEolSlack = 1e-12;
constexpr double kOutlierSigmas = 3.0;

struct Slot {
  Date date;
  int first_day;  // window bounds, day of month
  int last_day;
  bool weekend;
  bool festival = false;
};

Date make_date(int y, unsigned m, int d) {
  return Date{year{y}, month{m}, day{static_cast<unsigned>(d)}};
}

std::vector<Slot> month_slots(int y, unsigned m) {
  const int end = days_in_month(y, m);
  const std::array<Slot, 3> windows{{{{}, 1, 10, false}, {{}, 11, 20, true}, {{}, 21, end, false}}};
  std::vector<Slot> slots;
  for (Slot s : windows) {
    for (int d = s.first_day; d <= s.last_day; ++d) {
      const Date date = make_date(y, m, d);
      if (is_weekend(date) == s.weekend) {
        s.date = date;
        slots.push_back(s);
        break;
      }
    }
    if (slots.empty() || slots.back().first_day != s.first_day) {
      throw Error(ErrorCode::MissingData, "no eligible typical day in " + std::to_string(y) + "-" +
                                              std::to_string(m));
    }
  }
  return slots;
}

void apply_festivals(std::vector<Slot>& slots, unsigned m) {
  static constexpr std::array<std::pair<unsigned, unsigned>, 3> kFestivals{
      {{7, 4}, {11, 1}, {12, 25}}};
  for (auto [fm, fd] : kFestivals) {
    if (fm != m) continue;
    const Date f = Date{slots.front().date.year(), month{fm}, day{fd}};
    Slot* target = &slots.front();
    for (auto& s : slots) {
      if (s.date <= f) target = &s;
    }
    target->date = f;
    target->festival = true;
  }
}

std::vector<Slot> calendar_slots(int y) {
  std::vector<Slot> all;
  for (unsigned m = 1; m <= 12; ++m) {
    auto slots = month_slots(y, m);
    apply_festivals(slots, m);
    all.insert(all.end(), slots.begin(), slots.end());
  }
  return all;
}

double daily_mean(const MarketDay& d) {
  double s = 0.0;
  for (double p : d.price_energy) s += p;
  return s / kHoursPerDay;
}

int check_full_year(std::span<const MarketDay> days) {
  if (days.empty()) throw Error(ErrorCode::EmptyInput, "no price data");
  const int y = static_cast<int>(days.front().date.year());
  if (static_cast<int>(days.size()) != days_in_year(y)) {
    throw Error(ErrorCode::MissingData, "price data must cover every day of " + std::to_string(y));
  }
  Date expect = make_date(y, 1, 1);
  for (const auto& d : days) {
    if (d.date != expect) {
      throw Error(ErrorCode::MissingData, "expected prices for " + format_date(expect) +
                                              ", found " + format_date(d.date));
    }
    expect = next_day(expect);
  }
  return y;
}

DayContribution scaled(const DayContribution& c, double w) {
  return {c.income * w,     c.cost_op * w,   c.cap_loss * w,   c.cost_loss * w,
          c.energy_out * w, c.energy_in * w, c.energy_cost * w};
}

void add_to(LedgerRow& row, const DayContribution& c) {
  row.income += c.income;
  row.cost_op += c.cost_op;
  row.cap_loss += c.cap_loss;
  row.cost_loss += c.cost_loss;
  row.energy_out += c.energy_out;
  row.energy_in += c.energy_in;
  row.energy_cost += c.energy_cost;
}

}  // namespace

LifecycleMethod parse_method(std::string_view name) {
  if (name == "typical") return LifecycleMethod::Typical;
  if (name == "cluster") return LifecycleMethod::Cluster;
  throw Error(ErrorCode::InvalidArgument,
              "unknown method '" + std::string(name) + "' (expected typical or cluster)");
}

std::string_view to_string(LifecycleMethod method) {
  return method == LifecycleMethod::Typical ? "typical" : "cluster";
}

TypicalDaySet calendar_typical_days(int y) {
  TypicalDaySet set;
  set.year = y;
  for (const auto& s : calendar_slots(y)) set.dates.push_back(s.date);
  return set;
}

TypicalDaySet select_typical_days(std::span<const MarketDay> year_days) {
  const int y = check_full_year(year_days);
  auto slots = calendar_slots(y);
  auto index_of = [&](const Date& d) {
    return static_cast<std::size_t>((std::chrono::sys_days{d} -
                                     std::chrono::sys_days{make_date(y, 1, 1)}).count());
  };

  for (unsigned m = 1; m <= 12; ++m) {
    const std::size_t first = index_of(make_date(y, m, 1));
    const int n = days_in_month(y, m);
    double mu = 0.0;
    for (int i = 0; i < n; ++i) mu += daily_mean(year_days[first + i]);
    mu /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) var += std::pow(daily_mean(year_days[first + i]) - mu, 2);
    const double sigma = std::sqrt(var / n);
    auto outlier = [&](const Date& d) {
      return std::abs(daily_mean(year_days[index_of(d)]) - mu) > kOutlierSigmas * sigma;
    };

    for (auto& s : slots) {
      if (static_cast<unsigned>(s.date.month()) != m || s.festival || !outlier(s.date)) continue;
      for (int d = static_cast<int>(static_cast<unsigned>(s.date.day())) + 1; d <= s.last_day; ++d) {
        const Date c = make_date(y, m, d);
        if (is_weekend(c) == s.weekend && !outlier(c)) {
          s.date = c;
          break;
        }
      }
    }
  }

  TypicalDaySet set;
  set.year = y;
  for (const auto& s : slots) set.dates.push_back(s.date);
  return set;
}

TypicalDaySet select_typical_days(int y, const std::filesystem::path& price_root) {
  const auto days = load_year(price_root, y);
  return select_typical_days(days);
}

DayContribution DayContribution::from(const DailyResult& r, const EnergyFlows& f,
                                      const DegradationParams& d) {
  return {r.gross_income, r.cost_op(), r.cap_loss * d.capacity_per_life(), r.cost_loss,
          f.energy_out,   f.energy_in, f.purchase_cost};
}

LedgerRow accumulate_typical(const LedgerRow& prev, std::span<const DayContribution> days) {
  if (days.size() != static_cast<std::size_t>(kTypicalDays)) {
    throw Error(ErrorCode::WrongCount, "typical-day accumulation needs exactly 36 results, got " +
                                           std::to_string(days.size()));
  }
  LedgerRow sum;
  for (const auto& d : days) add_to(sum, d);
  LedgerRow next = prev;
  next.year = prev.year + 1;
  add_to(next, scaled({sum.income, sum.cost_op, sum.cap_loss, sum.cost_loss, sum.energy_out,
                       sum.energy_in, sum.energy_cost},
                      kTypicalScale));
  return next;
}

LedgerRow accumulate_cluster(const LedgerRow& prev, std::span<const DayContribution> clusters,
                             std::span<const int> day_counts, int days_in_year) {
  if (clusters.size() != day_counts.size()) {
    throw Error(ErrorCode::CountMismatch, "one day count per cluster result is required");
  }
  long total = 0;
  for (int c : day_counts) {
    if (c < 0) throw Error(ErrorCode::CountMismatch, "negative day count");
    total += c;
  }
  if (total != days_in_year) {
    throw Error(ErrorCode::CountMismatch, "day counts sum to " + std::to_string(total) +
                                              ", expected " + std::to_string(days_in_year));
  }
  LedgerRow next = prev;
  next.year = prev.year + 1;
  for (std::size_t i = 0; i < clusters.size(); ++i) add_to(next, scaled(clusters[i], day_counts[i]));
  return next;
}

LedgerRow LifecycleLedger::annual(std::size_t i) const {
  LedgerRow r = rows.at(i);
  if (i == 0) return r;
  const LedgerRow& p = rows[i - 1];
  r.income -= p.income;
  r.cost_op -= p.cost_op;
  r.cap_loss -= p.cap_loss;
  r.cost_loss -= p.cost_loss;
  r.energy_out -= p.energy_out;
  r.energy_in -= p.energy_in;
  r.energy_cost -= p.energy_cost;
  return r;
}

void LifecycleConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, std::string("lifecycle: ") + what);
  };
  require(k >= 1, "k must be >= 1");
  require(restarts >= 1, "restarts must be >= 1");
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  require(fade_knee > 0.0 && fade_knee < 1.0, "fade_knee must lie in (0, 1)");
  require(fade_multiplier >= 1.0, "fade_multiplier must be >= 1");
  require(max_years >= 1, "max_years must be >= 1");
}

LifecycleLedger project_ledger(const LedgerRow& annual, LifecycleMethod method,
                               const LifecycleConfig& config) {
  config.validate();
  if (!(annual.cap_loss > 0.0)) {
    throw Error(ErrorCode::NeverDies, "annual capacity loss is zero; the battery never reaches "
                                      "end of life");
  }
  LifecycleLedger ledger;
  ledger.method = method;
  ledger.threshold = config.threshold;
  LedgerRow row;
  while (true) {
    if (row.year >= config.max_years) {
      throw Error(ErrorCode::NeverDies, "end of life not reached within " +
                                            std::to_string(config.max_years) + " years");
    }
    DayContribution add{annual.income,     annual.cost_op,   annual.cap_loss, annual.cost_loss,
                        annual.energy_out, annual.energy_in, annual.energy_cost};
    if (config.accelerated_fade && row.cap_loss + annual.cap_loss > config.fade_knee) {
      // Loss accrued beyond the knee runs at the multiplied rate.
      const double before = std::clamp(config.fade_knee - row.cap_loss, 0.0, annual.cap_loss);
      const double loss = before + (annual.cap_loss - before) * config.fade_multiplier;
      add.cost_loss *= loss / annual.cap_loss;
      add.cap_loss = loss;
    }
    add_to(row, add);
    ++row.year;
    ledger.rows.push_back(row);
    if (row.cap_loss >= config.threshold - kEolSlack) break;
  }
  ledger.end_of_life_year = row.year;
  return ledger;
}

LifecycleRun run_lifecycle(std::span<const MarketDay> year_days, const BatteryParams& battery,
                           const DegradationParams& degradation, const LifecycleConfig& config,
                           const EregLookup& e_reg) {
  config.validate();
  const int y = check_full_year(year_days);
  LifecycleRun run;
  std::vector<BatteryParams> params;

  auto rate_of = [&](const Date& d) -> std::optional<double> {
    return e_reg ? e_reg(d) : std::nullopt;
  };

  if (config.method == LifecycleMethod::Typical) {
    run.typical = select_typical_days(year_days);
    const Date jan1 = make_date(y, 1, 1);
    for (const Date& d : run.typical->dates) {
      const auto idx = (std::chrono::sys_days{d} - std::chrono::sys_days{jan1}).count();
      run.representatives.push_back(year_days[static_cast<std::size_t>(idx)]);
      run.weights.push_back(kTypicalScale);
      BatteryParams b = battery;
      if (auto r = rate_of(d)) b.e_reg = *r;
      params.push_back(b);
    }
  } else {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < config.restarts; ++i) seeds.push_back(config.seed + static_cast<std::uint64_t>(i));
    run.clusters = cluster_days_best(year_days, config.k, config.metric, seeds);
    const auto& m = *run.clusters;
    run.representatives = m.representatives;
    run.weights = m.day_counts.at(y);
    for (int c = 0; c < m.k; ++c) {
      // Members' regulation energy rates are averaged like their prices.
      double sum = 0.0;
      int n = 0;
      for (std::size_t i = 0; i < m.dates.size(); ++i) {
        if (m.assignments[i] != c) continue;
        if (auto r = rate_of(m.dates[i])) {
          sum += *r;
          ++n;
        }
      }
      BatteryParams b = battery;
      if (n > 0) b.e_reg = sum / n;
      params.push_back(b);
    }
  }

  std::vector<DayContribution> contributions;
  for (std::size_t i = 0; i < run.representatives.size(); ++i) {
    DispatchSolution sol;
    run.results.push_back(simulate_day(run.representatives[i], params[i], degradation, &sol));
    run.flows.push_back(energy_flows(sol, PriceHorizon::of(run.representatives[i]), params[i]));
    contributions.push_back(DayContribution::from(run.results.back(), run.flows.back(), degradation));
  }

  const LedgerRow annual = config.method == LifecycleMethod::Typical
                               ? accumulate_typical(LedgerRow{}, contributions)
                               : accumulate_cluster(LedgerRow{}, contributions, run.weights,
                                                    days_in_year(y));
  run.ledger = project_ledger(annual, config.method, config);
  return run;
}

}  // namespace bess
