#include "bess/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include "bess/error.hpp"
#include "csv.hpp"

namespace bess {

namespace {

constexpr double kSecondsPerDay = 86400.0;

std::string two_decimals(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace

std::vector<MarketDay> scale_prices(std::vector<MarketDay> days, double f) {
  if (f == 1.0) return days;
  for (auto& d : days) {
    for (auto* s : {&d.price_energy, &d.price_reg_cap, &d.price_reg_perf, &d.price_res}) {
      for (double& p : *s) p *= f;
    }
  }
  return days;
}

std::vector<MarketDay> load_prices(const Config& config) {
  if (config.market.price_root.empty() || config.market.year == 0) {
    throw Error(ErrorCode::InvalidConfig, "market.price_root and market.year are required");
  }
  return scale_prices(load_year(config.market.price_root, config.market.year),
                      config.market.price_scale);
}

EregLookup regulation_rates(const Config& config) {
  if (!config.market.regd_signal) return {};
  const auto signal = load_reg_signal(*config.market.regd_signal, config.market.cadence_s);
  const double cadence = signal.cadence_s();
  const auto per_day = static_cast<std::size_t>(kSecondsPerDay / cadence);
  const std::size_t days =
      kSecondsPerDay / cadence == static_cast<double>(per_day) ? signal.samples().size() / per_day : 0;
  if (days < 2) {
    const double rate = reg_energy_rate(signal);
    return [rate](const Date&) -> std::optional<double> { return rate; };
  }
  std::vector<double> rates;
  for (std::size_t d = 0; d < days; ++d) {
    auto slice = signal.samples().subspan(d * per_day, per_day);
    rates.push_back(reg_energy_rate(RegSignal({slice.begin(), slice.end()}, cadence)));
  }
  return [rates](const Date& date) -> std::optional<double> {
    const Date jan1{date.year(), std::chrono::January, std::chrono::day{1}};
    const auto doy = (std::chrono::sys_days{date} - std::chrono::sys_days{jan1}).count();
    return rates[static_cast<std::size_t>(doy) % rates.size()];
  };
}

PipelineResult run_pipeline(const Config& config, const std::vector<MarketDay>& year_days,
                            const EregLookup& e_reg) {
  config.validate();
  PipelineResult r;
  r.run = run_lifecycle(year_days, config.dispatch_battery(), config.degradation, config.lifecycle,
                        e_reg);
  r.cashflows = build_cashflows(r.run.ledger, config.costs);
  r.irr = irr(r.cashflows.flows);
  r.lcos = lcos(lcos_inputs(r.run.ledger, config.costs, config.discount));
  return r;
}

SensitivityRow sensitivity_row(const std::string& name, const PipelineResult& result) {
  const auto first = result.run.ledger.annual(0);
  SensitivityRow row;
  row.scenario = name;
  row.income = first.income;
  row.cost_op = first.cost_op;
  row.cost_loss = first.cost_loss;
  row.cap_loss = 100.0 * first.cap_loss;
  row.lifetime = result.run.ledger.end_of_life_year;
  row.irr = 100.0 * result.irr.rate;
  return row;
}

std::vector<SensitivityRow> run_sensitivity(const Config& base,
                                            const std::vector<ScenarioSpec>& scenarios,
                                            const std::vector<MarketDay>& base_year,
                                            const EregLookup& e_reg) {
  std::vector<SensitivityRow> rows;
  rows.push_back(sensitivity_row("standard", run_pipeline(base, base_year, e_reg)));
  for (const auto& s : scenarios) {
    const Config c = apply_scenario(base, s);
    const auto days = scale_prices(base_year, s.price_scale);
    rows.push_back(sensitivity_row(s.name, run_pipeline(c, days, e_reg)));
  }
  return rows;
}

std::vector<SensitivityRow> run_sensitivity(const Config& base,
                                            const std::vector<ScenarioSpec>& scenarios) {
  return run_sensitivity(base, scenarios, load_prices(base), regulation_rates(base));
}

std::string format_sensitivity(const std::vector<SensitivityRow>& rows) {
  std::string out = "scenario,income,cost_op,cost_loss,cap_loss,lifetime,irr\n";
  for (const auto& r : rows) {
    out += r.scenario + ',' + two_decimals(r.income) + ',' + two_decimals(r.cost_op) + ',' +
           two_decimals(r.cost_loss) + ',' + two_decimals(r.cap_loss) + ',' +
           std::to_string(r.lifetime) + ',' + two_decimals(r.irr) + '\n';
  }
  return out;
}

void write_sensitivity(const std::vector<SensitivityRow>& rows, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file.string());
  out << format_sensitivity(rows);
}

std::vector<SensitivityRow> load_sensitivity(const std::filesystem::path& file) {
  const auto rows = detail::read_csv(
      file, {"scenario", "income", "cost_op", "cost_loss", "cap_loss", "lifetime", "irr"});
  std::vector<SensitivityRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::size_t line = i + 2;
    SensitivityRow row;
    row.scenario = r[0];
    row.income = detail::parse_number(r[1], file, line);
    row.cost_op = detail::parse_number(r[2], file, line);
    row.cost_loss = detail::parse_number(r[3], file, line);
    row.cap_loss = detail::parse_number(r[4], file, line);
    const double life = detail::parse_number(r[5], file, line);
    row.lifetime = static_cast<int>(life);
    if (row.lifetime != life) {
      throw Error(ErrorCode::MalformedFile, file.string() + ": line " + std::to_string(line) +
                                                ": lifetime must be an integer");
    }
    row.irr = detail::parse_number(r[6], file, line);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace bess
