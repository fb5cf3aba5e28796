#include "bess/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bess/error.hpp"
#include "csv.hpp"

namespace bess {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

// Walks one section, handing every key to `apply` and rejecting the rest.
class Section {
 public:
  Section(const pt::ptree& tree, std::string name) : name_(std::move(name)) {
    if (auto child = tree.get_child_optional(name_)) node_ = &*child;
  }

  bool has(const std::string& key) const { return node_ && node_->find(key) != node_->not_found(); }

  std::optional<std::string> text(const std::string& key) {
    if (!has(key)) return std::nullopt;
    used_.insert(key);
    return node_->get<std::string>(key);
  }

  void number(const std::string& key, double& out) {
    if (auto t = text(key)) out = parse(key, *t);
  }

  void integer(const std::string& key, int& out) {
    if (auto t = text(key)) {
      const double v = parse(key, *t);
      if (v != std::floor(v) || std::abs(v) > 1e9) invalid(where(key) + ": expected an integer");
      out = static_cast<int>(v);
    }
  }

  void flag(const std::string& key, bool& out) {
    if (auto t = text(key)) {
      if (*t == "true" || *t == "1") {
        out = true;
      } else if (*t == "false" || *t == "0") {
        out = false;
      } else {
        invalid(where(key) + ": expected true or false");
      }
    }
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, value] : *node_) {
      if (!used_.count(key)) invalid("unknown key '" + where(key) + "'");
      if (!value.empty()) invalid(where(key) + ": nested keys are not supported");
    }
  }

  std::string where(const std::string& key) const { return name_ + "." + key; }

 private:
  double parse(const std::string& key, const std::string& t) const {
    const auto v = detail::try_parse_number(t);
    if (!v) invalid(where(key) + ": cannot parse '" + t + "' as a number");
    if (!std::isfinite(*v)) invalid(where(key) + ": value must be finite");
    return *v;
  }

  std::string name_;
  const pt::ptree* node_ = nullptr;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <class F>
void rethrow_as_config(const std::string& what, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    invalid(what + ": " + e.what());
  }
}

}  // namespace

void ScenarioSpec::validate() const {
  if (name.empty()) invalid("scenario name must not be empty");
  if (!(price_scale > 0.0) || !(n100_scale > 0.0)) {
    invalid("scenario '" + name + "': multipliers must be positive");
  }
  if (k_dec_override && !(*k_dec_override >= 0.0)) {
    invalid("scenario '" + name + "': k_dec must be >= 0");
  }
}

BatteryParams Config::dispatch_battery() const {
  BatteryParams b = battery;
  if (!cost_bat_unit_set) b.cost_bat_unit = costs.cost_bat_exc;
  return b;
}

void Config::validate() const {
  rethrow_as_config("battery", [&] { dispatch_battery().validate(); });
  rethrow_as_config("degradation", [&] { degradation.validate(); });
  costs.validate();
  lifecycle.validate();
  if (!(market.cadence_s > 0.0)) invalid("signal.cadence_s must be positive");
  if (!(market.price_scale > 0.0)) invalid("market.price_scale must be positive");
  if (discount.rates.empty()) invalid("finance.discount must list at least one rate");
  for (const auto& s : scenarios) s.validate();
}

Config parse_config(const std::string& text, const std::filesystem::path& base_dir,
                    const std::optional<std::string>& chemistry) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    invalid(std::string("cannot parse config: ") + e.what());
  }
  static const std::set<std::string> kSections{"battery",   "degradation", "costs",   "market",
                                               "signal",    "lifecycle",   "finance", "sensitivity"};
  for (const auto& [name, node] : tree) {
    if (!kSections.count(name)) invalid("unknown section or top-level key '" + name + "'");
  }

  Config c;
  Section deg(tree, "degradation"), costs(tree, "costs"), bat(tree, "battery");

  // Presets first, then field overrides.
  std::string preset = chemistry.value_or(deg.text("preset").value_or("lfp"));
  if (chemistry) deg.text("preset");
  rethrow_as_config("degradation.preset", [&] {
    c.degradation = degradation_preset(preset);
    c.costs = cost_preset(preset);
  });
  c.chemistry = preset;

  for (auto [key, field] : std::initializer_list<std::pair<const char*, double DegradationParams::*>>{
           {"beta", &DegradationParams::beta},
           {"k_T", &DegradationParams::k_T},
           {"k_DoD", &DegradationParams::k_DoD},
           {"k_C_ch", &DegradationParams::k_C_ch},
           {"k_C_dch", &DegradationParams::k_C_dch},
           {"k_mSOC", &DegradationParams::k_mSOC},
           {"alpha_opt", &DegradationParams::alpha_opt},
           {"T_ref", &DegradationParams::T_ref},
           {"mSOC_ref", &DegradationParams::mSOC_ref},
           {"n_100", &DegradationParams::n_100},
           {"alpha_cycle", &DegradationParams::alpha_cycle},
           {"soh_eol", &DegradationParams::soh_eol}}) {
    deg.number(key, c.degradation.*field);
  }
  deg.finish();

  for (auto [key, field] : std::initializer_list<std::pair<const char*, double CostModel::*>>{
           {"cost_bat_pur", &CostModel::cost_bat_pur},
           {"cost_equ", &CostModel::cost_equ},
           {"cost_sta", &CostModel::cost_sta},
           {"k_dec", &CostModel::k_dec},
           {"recycle_ratio_bat", &CostModel::recycle_ratio_bat},
           {"recycle_ratio_equ", &CostModel::recycle_ratio_equ}}) {
    costs.number(key, c.costs.*field);
  }
  c.costs.cost_bat_exc = replacement_cost(c.costs);
  c.costs.income_rcy = recycling_income(c.costs);
  costs.number("cost_bat_exc", c.costs.cost_bat_exc);
  costs.number("income_rcy", c.costs.income_rcy);
  costs.finish();

  BatteryParams& b = c.battery;
  bat.number("E_r", b.E_r);
  b.E_min = 0.1 * b.E_r;
  b.E_max = 0.9 * b.E_r;
  for (auto [key, field] : std::initializer_list<std::pair<const char*, double BatteryParams::*>>{
           {"P_r", &BatteryParams::P_r},
           {"E_min", &BatteryParams::E_min},
           {"E_max", &BatteryParams::E_max},
           {"eff_ch", &BatteryParams::eff_ch},
           {"eff_dch", &BatteryParams::eff_dch},
           {"r_self", &BatteryParams::r_self},
           {"t_res", &BatteryParams::t_res},
           {"t_reg", &BatteryParams::t_reg},
           {"prob_res", &BatteryParams::prob_res},
           {"e_reg", &BatteryParams::e_reg},
           {"score_perf", &BatteryParams::score_perf},
           {"r_mileage", &BatteryParams::r_mileage},
           {"k_fix", &BatteryParams::k_fix},
           {"k_var", &BatteryParams::k_var}}) {
    bat.number(key, b.*field);
  }
  if (bat.has("cost_bat_unit")) {
    bat.number("cost_bat_unit", b.cost_bat_unit);
    c.cost_bat_unit_set = true;
  }
  bat.finish();

  Section market(tree, "market");
  if (auto p = market.text("price_root")) c.market.price_root = resolve(base_dir, *p);
  market.integer("year", c.market.year);
  if (auto p = market.text("regd_signal")) c.market.regd_signal = resolve(base_dir, *p);
  if (auto p = market.text("rega_signal")) c.market.rega_signal = resolve(base_dir, *p);
  market.number("price_scale", c.market.price_scale);
  market.finish();

  Section signal(tree, "signal");
  signal.number("cadence_s", c.market.cadence_s);
  signal.finish();

  Section life(tree, "lifecycle");
  LifecycleConfig& L = c.lifecycle;
  if (auto m = life.text("method")) rethrow_as_config("lifecycle.method", [&] { L.method = parse_method(*m); });
  if (auto m = life.text("metric")) rethrow_as_config("lifecycle.metric", [&] { L.metric = parse_metric(*m); });
  life.integer("k", L.k);
  int seed = static_cast<int>(L.seed);
  life.integer("seed", seed);
  if (seed < 0) invalid("lifecycle.seed must be >= 0");
  L.seed = static_cast<std::uint64_t>(seed);
  life.integer("restarts", L.restarts);
  life.number("threshold", L.threshold);
  life.flag("accelerated_fade", L.accelerated_fade);
  life.number("fade_knee", L.fade_knee);
  life.number("fade_multiplier", L.fade_multiplier);
  life.integer("max_years", L.max_years);
  life.finish();

  Section fin(tree, "finance");
  if (auto d = fin.text("discount")) {
    rethrow_as_config("finance.discount", [&] { c.discount = DiscountSchedule::parse(*d); });
  }
  fin.finish();

  Section sens(tree, "sensitivity");
  if (auto p = sens.text("scenarios")) {
    const auto path = resolve(base_dir, *p);
    rethrow_as_config("sensitivity.scenarios", [&] { c.scenarios = load_scenarios(path); });
  }
  sens.finish();

  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& file, const std::optional<std::string>& chemistry) {
  std::ifstream in(file);
  if (!in) invalid("cannot open config file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), file.parent_path(), chemistry);
}

std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& file) {
  const auto rows = detail::read_csv(file, {"name", "price_scale", "n100_scale", "k_dec"});
  std::vector<ScenarioSpec> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::size_t line = i + 2;
    ScenarioSpec s;
    s.name = r[0];
    s.price_scale = detail::parse_number(r[1], file, line);
    s.n100_scale = detail::parse_number(r[2], file, line);
    if (!r[3].empty()) s.k_dec_override = detail::parse_number(r[3], file, line);
    s.validate();
    out.push_back(std::move(s));
  }
  return out;
}

void write_scenarios(const std::vector<ScenarioSpec>& scenarios, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file.string());
  out << "name,price_scale,n100_scale,k_dec\n";
  for (const auto& s : scenarios) {
    out << s.name << ',' << detail::format_number(s.price_scale) << ','
        << detail::format_number(s.n100_scale) << ','
        << (s.k_dec_override ? detail::format_number(*s.k_dec_override) : std::string()) << '\n';
  }
}

Config apply_scenario(const Config& base, const ScenarioSpec& s) {
  s.validate();
  Config c = base;
  c.market.price_scale *= s.price_scale;
  c.degradation.n_100 *= s.n100_scale;
  if (s.k_dec_override) {
    c.costs.k_dec = *s.k_dec_override;
    c.costs.cost_bat_exc = replacement_cost(c.costs);
  }
  return c;
}

}  // namespace bess
