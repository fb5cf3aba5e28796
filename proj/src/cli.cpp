#include "bess/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "bess/error.hpp"
#include "bess/pipeline.hpp"
#include "bess/serialization.hpp"
#include "csv.hpp"

namespace bess {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitOutcome = 2;

struct Options {
  std::string config;
  std::string out;
  std::string date;
  std::string method;
  std::string metric;
  std::string chemistry;
  std::optional<int> k;
  std::optional<int> seed;
  std::optional<double> threshold;
  // ingest / mileage
  std::string energy, reg, res, root;
  int year = 0;
  std::string rega, regd;
  double cadence = 2.0;
  // outputs
  std::string solution_out, centroids, clusters_out;
  // finance
  std::string ledger, flows, discount, scenarios;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
}

void emit(const Json& j, const std::string& path, std::ostream& out) { emit(j.dump(2) + "\n", path, out); }

std::optional<std::string> chemistry_of(const Options& o) {
  if (o.chemistry.empty()) return std::nullopt;
  return o.chemistry;
}

Config config_of(const Options& o) {
  Config c = load_config(o.config, chemistry_of(o));
  if (!o.method.empty()) c.lifecycle.method = parse_method(o.method);
  if (!o.metric.empty()) c.lifecycle.metric = parse_metric(o.metric);
  if (o.k) c.lifecycle.k = *o.k;
  if (o.seed) {
    if (*o.seed < 0) throw Error(ErrorCode::InvalidArgument, "--seed must be >= 0");
    c.lifecycle.seed = static_cast<std::uint64_t>(*o.seed);
  }
  if (o.threshold) c.lifecycle.threshold = *o.threshold;
  if (!o.discount.empty()) c.discount = DiscountSchedule::parse(o.discount);
  c.validate();
  return c;
}

// Costs and discounting for the finance commands: from the config when one
// is given, else the chemistry preset.
Config finance_config(const Options& o) {
  if (!o.config.empty()) return config_of(o);
  Config c = parse_config("", ".", chemistry_of(o));
  if (!o.discount.empty()) c.discount = DiscountSchedule::parse(o.discount);
  return c;
}

std::vector<double> load_flows(const std::string& file) {
  const auto rows = detail::read_csv(file, {"year", "flow"});
  std::vector<double> flows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double year = detail::parse_number(rows[i][0], file, i + 2);
    if (year != static_cast<double>(i)) {
      throw Error(ErrorCode::MalformedFile, file + ": years must run 0, 1, 2, ...");
    }
    flows.push_back(detail::parse_number(rows[i][1], file, i + 2));
  }
  if (flows.empty()) throw Error(ErrorCode::MalformedFile, file + ": no cash flows");
  return flows;
}

int cmd_ingest(const Options& o, std::ostream& out) {
  if (!o.root.empty()) {
    if (o.year == 0) throw Error(ErrorCode::InvalidArgument, "--root needs --year");
    const auto days = load_year(o.root, o.year);
    double sum = 0.0;
    for (const auto& d : days)
      for (double p : d.price_energy) sum += p;
    Json j;
    j["year"] = o.year;
    j["days"] = days.size();
    j["mean_energy_price"] = sum / static_cast<double>(days.size() * kHoursPerDay);
    emit(j, o.out, out);
    return kExitOk;
  }
  if (o.energy.empty() || o.reg.empty() || o.res.empty() || o.date.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "ingest needs --energy, --reg, --res and --date (or --root with --year)");
  }
  emit(to_json(load_market_day(o.energy, o.reg, o.res, parse_date(o.date))), o.out, out);
  return kExitOk;
}

int cmd_mileage(const Options& o, std::ostream& out) {
  const auto regd = load_reg_signal(o.regd, o.cadence);
  Json j;
  j["mileage_regd"] = mileage(regd);
  if (!o.rega.empty()) {
    const auto rega = load_reg_signal(o.rega, o.cadence);
    j["mileage_rega"] = mileage(rega);
    j["mileage_ratio"] = mileage_ratio(rega, regd);
  }
  j["e_reg"] = reg_energy_rate(regd);
  emit(j, o.out, out);
  return kExitOk;
}

int cmd_simulate_day(const Options& o, std::ostream& out) {
  const Config c = config_of(o);
  const Date date = parse_date(o.date);
  const auto day = scale_prices({load_market_day(c.market.price_root, date)}, c.market.price_scale)[0];
  BatteryParams b = c.dispatch_battery();
  if (auto lookup = regulation_rates(c)) {
    if (auto r = lookup(date)) b.e_reg = *r;
  }
  DispatchSolution sol;
  const auto result = simulate_day(day, b, c.degradation, &sol);
  emit(to_json(result), o.out, out);
  if (!o.solution_out.empty()) write_json(to_json(sol), o.solution_out);
  return kExitOk;
}

int cmd_cluster(const Options& o, std::ostream& out) {
  const Config c = config_of(o);
  const auto days = load_prices(c);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < c.lifecycle.restarts; ++i) seeds.push_back(c.lifecycle.seed + static_cast<std::uint64_t>(i));
  const auto model = cluster_days_best(days, c.lifecycle.k, c.lifecycle.metric, seeds);
  emit(to_json(model), o.out, out);
  if (!o.centroids.empty()) write_cluster_csv(model, o.centroids);
  return kExitOk;
}

int cmd_lifecycle(const Options& o, std::ostream& out) {
  const Config c = config_of(o);
  const auto days = load_prices(c);
  const auto run = run_lifecycle(days, c.dispatch_battery(), c.degradation, c.lifecycle,
                                 regulation_rates(c));
  emit(to_json(run.ledger), o.out, out);
  if (!o.clusters_out.empty()) {
    if (run.clusters) {
      write_cluster_csv(*run.clusters, o.clusters_out);
    } else {
      std::filesystem::create_directories(o.clusters_out);
      write_json(to_json(*run.typical), std::filesystem::path(o.clusters_out) / "typical_days.json");
    }
  }
  return kExitOk;
}

int cmd_irr(const Options& o, std::ostream& out) {
  std::vector<double> flows;
  if (!o.flows.empty()) {
    flows = load_flows(o.flows);
  } else if (!o.ledger.empty()) {
    flows = build_cashflows(ledger_from_json(read_json(o.ledger)), finance_config(o).costs).flows;
  } else {
    throw Error(ErrorCode::InvalidArgument, "irr needs --ledger <ledger.json> or --flows <year,flow csv>");
  }
  const auto r = irr(flows);
  Json j;
  j["irr"] = r.rate;
  j["npv_check"] = npv(flows, r.rate);
  j["multiple_roots"] = r.multiple_roots;
  emit(j, o.out, out);
  return kExitOk;
}

int cmd_lcos(const Options& o, std::ostream& out) {
  if (o.ledger.empty()) throw Error(ErrorCode::InvalidArgument, "lcos needs --ledger <ledger.json>");
  const Config c = finance_config(o);
  const auto ledger = ledger_from_json(read_json(o.ledger));
  Json j;
  j["lcos_usd_per_mwh"] = lcos(lcos_inputs(ledger, c.costs, c.discount));
  emit(j, o.out, out);
  return kExitOk;
}

int cmd_sensitivity(const Options& o, std::ostream& out) {
  const Config c = config_of(o);
  const auto scenarios = o.scenarios.empty() ? c.scenarios : load_scenarios(o.scenarios);
  emit(format_sensitivity(run_sensitivity(c, scenarios)), o.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Battery storage life-cycle economics"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("--config", o.config, "INI configuration file");
    if (needs_config) cfg->required();
    sub->add_option("--out", o.out, "output file (default: stdout)");
    sub->add_option("--chemistry", o.chemistry, "lfp|ncm preset")
        ->check(CLI::IsMember({"lfp", "ncm"}));
  };
  auto lifecycle_flags = [&](CLI::App* sub) {
    sub->add_option("--method", o.method, "typical|cluster")->check(CLI::IsMember({"typical", "cluster"}));
    sub->add_option("--k", o.k, "cluster count");
    sub->add_option("--seed", o.seed, "clustering seed");
    sub->add_option("--metric", o.metric, "dtw|euclidean")->check(CLI::IsMember({"dtw", "euclidean"}));
    sub->add_option("--threshold", o.threshold, "end-of-life capacity loss fraction");
  };

  auto* ingest = app.add_subcommand("ingest", "validate price files");
  ingest->add_option("--energy", o.energy, "energy price CSV (hour,price)");
  ingest->add_option("--reg", o.reg, "regulation price CSV (hour,cap_price,perf_price)");
  ingest->add_option("--res", o.res, "reserve price CSV (hour,price)");
  ingest->add_option("--date", o.date, "YYYY-MM-DD");
  ingest->add_option("--root", o.root, "price directory <root>/<YYYY-MM-DD>/");
  ingest->add_option("--year", o.year, "year to validate under --root");
  ingest->add_option("--out", o.out, "output file (default: stdout)");

  auto* mil = app.add_subcommand("mileage", "regulation signal statistics");
  mil->add_option("--regd", o.regd, "RegD signal CSV (index,value)")->required();
  mil->add_option("--rega", o.rega, "RegA signal CSV (index,value)");
  mil->add_option("--cadence", o.cadence, "seconds per sample")->check(CLI::PositiveNumber);
  mil->add_option("--out", o.out, "output file (default: stdout)");

  auto* sim = app.add_subcommand("simulate-day", "optimal dispatch of one day");
  common(sim, true);
  sim->add_option("--date", o.date, "YYYY-MM-DD")->required();
  sim->add_option("--solution-out", o.solution_out, "write the hourly schedule as JSON");

  auto* clu = app.add_subcommand("cluster", "cluster the configured year of prices");
  common(clu, true);
  lifecycle_flags(clu);
  clu->add_option("--centroids", o.centroids, "directory for representative-day CSVs");

  auto* life = app.add_subcommand("lifecycle", "year-by-year ledger until end of life");
  common(life, true);
  lifecycle_flags(life);
  life->add_option("--clusters-out", o.clusters_out, "directory for clusters or typical days");

  auto* irr_cmd = app.add_subcommand("irr", "internal rate of return");
  common(irr_cmd, false);
  irr_cmd->add_option("--ledger", o.ledger, "ledger JSON from `lifecycle`");
  irr_cmd->add_option("--flows", o.flows, "cash flow CSV (year,flow)");

  auto* lcos_cmd = app.add_subcommand("lcos", "levelized cost of storage");
  common(lcos_cmd, false);
  lcos_cmd->add_option("--ledger", o.ledger, "ledger JSON from `lifecycle`")->required();
  lcos_cmd->add_option("--discount", o.discount, "per-year rates, e.g. 0.08x5,0.07x5,0.06x40");

  auto* sens = app.add_subcommand("sensitivity", "scenario table");
  common(sens, true);
  lifecycle_flags(sens);
  sens->add_option("--scenarios", o.scenarios, "scenario CSV (name,price_scale,n100_scale,k_dec)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    } else {
      err << app.help();
    }
    return kExitInvalid;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(o, out);
    if (mil->parsed()) return cmd_mileage(o, out);
    if (sim->parsed()) return cmd_simulate_day(o, out);
    if (clu->parsed()) return cmd_cluster(o, out);
    if (life->parsed()) return cmd_lifecycle(o, out);
    if (irr_cmd->parsed()) return cmd_irr(o, out);
    if (lcos_cmd->parsed()) return cmd_lcos(o, out);
    if (sens->parsed()) return cmd_sensitivity(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_outcome_error(e.code()) ? kExitOutcome : kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace bess
