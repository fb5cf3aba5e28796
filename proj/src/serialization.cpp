#include "bess/serialization.hpp"

#include <fstream>
#include <sstream>

#include "bess/error.hpp"

namespace bess {

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedFile, std::string(what) + ": " + e.what());
  }
}

Json hourly(const HourlySeries& s) { return Json(std::vector<double>(s.begin(), s.end())); }

HourlySeries hourly_from(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != kHoursPerDay) throw Error(ErrorCode::MalformedFile, "expected 24 hourly values");
  HourlySeries s{};
  std::copy(v.begin(), v.end(), s.begin());
  return s;
}

}  // namespace

Json to_json(const DailyResult& r) {
  Json j;
  j["income_energy"] = r.income_energy;
  j["income_reg"] = r.income_reg;
  j["income_res"] = r.income_res;
  j["cost_op_fix"] = r.cost_op_fix;
  j["cost_op_var"] = r.cost_op_var;
  j["cap_loss"] = r.cap_loss;
  j["cost_loss"] = r.cost_loss;
  j["gross_income"] = r.gross_income;
  j["half_cycles"] = r.half_cycles.cycles;
  return j;
}

DailyResult daily_result_from_json(const Json& j) {
  return guarded("DailyResult", [&] {
    DailyResult r;
    r.income_energy = j.at("income_energy").get<double>();
    r.income_reg = j.at("income_reg").get<double>();
    r.income_res = j.at("income_res").get<double>();
    r.cost_op_fix = j.at("cost_op_fix").get<double>();
    r.cost_op_var = j.at("cost_op_var").get<double>();
    r.cap_loss = j.at("cap_loss").get<double>();
    r.cost_loss = j.at("cost_loss").get<double>();
    r.gross_income = j.at("gross_income").get<double>();
    r.half_cycles.cycles = j.at("half_cycles").get<std::vector<double>>();
    return r;
  });
}

Json to_json(const DispatchSolution& s) {
  Json j;
  j["cap_ch"] = s.cap_ch;
  j["cap_dch"] = s.cap_dch;
  j["cap_reg"] = s.cap_reg;
  j["cap_res"] = s.cap_res;
  j["mode_b"] = s.mode_b;
  j["soc"] = s.soc;
  j["delta_e"] = s.delta_e;
  j["throughput"] = s.throughput;
  j["objective"] = s.objective;
  j["nodes"] = s.nodes;
  return j;
}

DispatchSolution dispatch_solution_from_json(const Json& j) {
  return guarded("DispatchSolution", [&] {
    DispatchSolution s;
    s.cap_ch = j.at("cap_ch").get<std::vector<double>>();
    s.cap_dch = j.at("cap_dch").get<std::vector<double>>();
    s.cap_reg = j.at("cap_reg").get<std::vector<double>>();
    s.cap_res = j.at("cap_res").get<std::vector<double>>();
    s.mode_b = j.at("mode_b").get<std::vector<int>>();
    s.soc = j.at("soc").get<std::vector<double>>();
    s.delta_e = j.at("delta_e").get<std::vector<double>>();
    s.throughput = j.at("throughput").get<std::vector<double>>();
    s.objective = j.at("objective").get<double>();
    s.nodes = j.value("nodes", 0);
    const std::size_t H = s.cap_ch.size();
    if (s.cap_dch.size() != H || s.cap_reg.size() != H || s.cap_res.size() != H ||
        s.mode_b.size() != H || s.soc.size() != H + 1 || s.delta_e.size() != H) {
      throw Error(ErrorCode::MalformedFile, "DispatchSolution: inconsistent series lengths");
    }
    return s;
  });
}

Json to_json(const LifecycleLedger& l) {
  Json j;
  j["method"] = std::string(to_string(l.method));
  j["threshold"] = l.threshold;
  j["end_of_life_year"] = l.end_of_life_year;
  Json rows = Json::array();
  for (const auto& r : l.rows) {
    rows.push_back({{"year", r.year},
                    {"income", r.income},
                    {"cost_op", r.cost_op},
                    {"cap_loss", r.cap_loss},
                    {"cost_loss", r.cost_loss},
                    {"energy_out", r.energy_out},
                    {"energy_in", r.energy_in},
                    {"energy_cost", r.energy_cost}});
  }
  j["rows"] = std::move(rows);
  return j;
}

LifecycleLedger ledger_from_json(const Json& j) {
  return guarded("LifecycleLedger", [&] {
    LifecycleLedger l;
    l.method = parse_method(j.at("method").get<std::string>());
    l.threshold = j.at("threshold").get<double>();
    l.end_of_life_year = j.at("end_of_life_year").get<int>();
    for (const auto& r : j.at("rows")) {
      LedgerRow row;
      row.year = r.at("year").get<int>();
      row.income = r.at("income").get<double>();
      row.cost_op = r.at("cost_op").get<double>();
      row.cap_loss = r.at("cap_loss").get<double>();
      row.cost_loss = r.value("cost_loss", 0.0);
      row.energy_out = r.value("energy_out", 0.0);
      row.energy_in = r.value("energy_in", 0.0);
      row.energy_cost = r.value("energy_cost", 0.0);
      if (row.year != static_cast<int>(l.rows.size()) + 1) {
        throw Error(ErrorCode::MalformedFile, "LifecycleLedger: years must run 1, 2, ...");
      }
      l.rows.push_back(row);
    }
    return l;
  });
}

Json to_json(const MarketDay& d) {
  Json j;
  j["date"] = format_date(d.date);
  j["price_energy"] = hourly(d.price_energy);
  j["price_reg_cap"] = hourly(d.price_reg_cap);
  j["price_reg_perf"] = hourly(d.price_reg_perf);
  j["price_res"] = hourly(d.price_res);
  return j;
}

namespace {

MarketDay market_day_from_json(const Json& j) {
  MarketDay d;
  d.date = parse_date(j.at("date").get<std::string>());
  d.price_energy = hourly_from(j.at("price_energy"));
  d.price_reg_cap = hourly_from(j.at("price_reg_cap"));
  d.price_reg_perf = hourly_from(j.at("price_reg_perf"));
  d.price_res = hourly_from(j.at("price_res"));
  return d;
}

}  // namespace

Json to_json(const ClusterModel& m) {
  Json j;
  j["k"] = m.k;
  j["metric"] = std::string(to_string(m.metric));
  j["seed"] = m.seed;
  j["inertia"] = m.inertia;
  j["iterations"] = m.iterations;
  j["centroids"] = m.centroids;
  Json reps = Json::array();
  for (const auto& r : m.representatives) reps.push_back(to_json(r));
  j["representatives"] = std::move(reps);
  Json assignments = Json::object();
  for (std::size_t i = 0; i < m.dates.size(); ++i) assignments[format_date(m.dates[i])] = m.assignments[i];
  j["assignments"] = std::move(assignments);
  Json counts = Json::object();
  for (const auto& [year, c] : m.day_counts) counts[std::to_string(year)] = c;
  j["day_counts"] = std::move(counts);
  return j;
}

ClusterModel cluster_model_from_json(const Json& j) {
  return guarded("ClusterModel", [&] {
    ClusterModel m;
    m.k = j.at("k").get<int>();
    m.metric = parse_metric(j.at("metric").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.inertia = j.at("inertia").get<double>();
    m.iterations = j.value("iterations", 0);
    m.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
    for (const auto& r : j.at("representatives")) m.representatives.push_back(market_day_from_json(r));
    for (const auto& [date, c] : j.at("assignments").items()) {
      m.dates.push_back(parse_date(date));
      m.assignments.push_back(c.get<int>());
    }
    for (const auto& [year, c] : j.at("day_counts").items()) {
      m.day_counts[std::stoi(year)] = c.get<std::vector<int>>();
    }
    if (static_cast<int>(m.centroids.size()) != m.k ||
        static_cast<int>(m.representatives.size()) != m.k) {
      throw Error(ErrorCode::MalformedFile, "ClusterModel: expected k centroids");
    }
    for (int a : m.assignments) {
      if (a < 0 || a >= m.k) throw Error(ErrorCode::MalformedFile, "ClusterModel: bad assignment");
    }
    return m;
  });
}

Json to_json(const TypicalDaySet& s) {
  Json j;
  j["year"] = s.year;
  j["scale_factor"] = s.scale_factor;
  Json dates = Json::array();
  for (const auto& d : s.dates) dates.push_back(format_date(d));
  j["dates"] = std::move(dates);
  return j;
}

void write_json(const Json& j, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file.string());
  out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedFile, "cannot open " + file.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedFile, file.string() + ": " + e.what());
  }
}

void write_cluster_csv(const ClusterModel& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (int c = 0; c < m.k; ++c) {
    write_market_day(m.representatives[static_cast<std::size_t>(c)],
                     dir / ("cluster_" + std::to_string(c)));
  }
  std::ofstream out(dir / "assignments.csv", std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + (dir / "assignments.csv").string());
  out << "date,cluster\n";
  for (std::size_t i = 0; i < m.dates.size(); ++i) {
    out << format_date(m.dates[i]) << ',' << m.assignments[i] << '\n';
  }
}

}  // namespace bess
