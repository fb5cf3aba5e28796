#include "bess/finance.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "bess/error.hpp"

namespace bess {

namespace {

constexpr double kScanLow = -0.99;
constexpr int kScanSteps = 1099;  // up to a rate of 10 in steps of 0.01

CostModel with_derived(CostModel c) {
  c.cost_bat_exc = replacement_cost(c);
  c.income_rcy = recycling_income(c);
  return c;
}

}  // namespace

void CostModel::validate() const {
  const double fields[] = {cost_bat_pur, cost_bat_exc, cost_equ,          cost_sta,
                           k_dec,        recycle_ratio_bat, recycle_ratio_equ, income_rcy};
  for (double v : fields) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidConfig, "cost fields must be finite and >= 0");
    }
  }
}

double replacement_cost(const CostModel& c) { return c.k_dec * c.cost_bat_pur; }

double recycling_income(const CostModel& c) {
  return c.recycle_ratio_bat * c.cost_bat_pur + c.recycle_ratio_equ * c.cost_equ;
}

CostModel lfp_costs() {
  CostModel c;
  c.cost_bat_pur = 4'150'000.0;
  c.cost_equ = 1'950'000.0;
  c.cost_sta = 1'280'000.0;
  c.k_dec = 4.0 / 11.0;
  c.recycle_ratio_bat = 0.30;
  c.recycle_ratio_equ = 0.40;
  return with_derived(c);
}

CostModel ncm_costs() {
  CostModel c;
  c.cost_bat_pur = 8'330'000.0;
  c.cost_equ = 1'950'000.0;
  c.cost_sta = 1'280'000.0;
  c.k_dec = 4.0 / 11.0;
  c.recycle_ratio_bat = 0.10;
  c.recycle_ratio_equ = 0.40;
  return with_derived(c);
}

CostModel cost_preset(std::string_view chemistry) {
  if (chemistry == "lfp") return lfp_costs();
  if (chemistry == "ncm") return ncm_costs();
  throw Error(ErrorCode::InvalidArgument,
              "unknown chemistry '" + std::string(chemistry) + "' (expected lfp or ncm)");
}

CashFlowSeries build_cashflows(const LifecycleLedger& ledger, const CostModel& costs) {
  if (ledger.rows.empty()) throw Error(ErrorCode::EmptyLedger, "ledger has no years");
  costs.validate();
  CashFlowSeries s;
  s.flows.push_back(-costs.investment());
  for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
    const auto a = ledger.annual(i);
    s.flows.push_back(a.income - a.cost_op);
  }
  s.flows.back() += costs.income_rcy;
  return s;
}

double npv(std::span<const double> flows, double rate) {
  if (flows.empty()) return 0.0;
  double total = flows[0];
  double factor = 1.0;
  for (std::size_t t = 1; t < flows.size(); ++t) {
    factor *= 1.0 + rate;
    total += flows[t] / factor;
  }
  return total;
}

IrrResult irr(std::span<const double> flows) {
  bool pos = false, neg = false;
  for (double f : flows) {
    pos = pos || f > 0.0;
    neg = neg || f < 0.0;
  }
  if (!pos || !neg) throw Error(ErrorCode::NoSignChange, "cash flows never change sign");

  auto grid = [](int k) { return kScanLow + 0.01 * k; };
  IrrResult result;
  bool found = false;
  double lo = 0.0, hi = 0.0, f_lo = 0.0;
  int roots = 0;
  double prev = npv(flows, grid(0));
  if (prev == 0.0) {
    found = true;
    lo = hi = grid(0);
    ++roots;
  }
  for (int k = 1; k <= kScanSteps; ++k) {
    const double r = grid(k);
    const double f = npv(flows, r);
    if (f == 0.0 || (prev != 0.0 && (f > 0.0) != (prev > 0.0))) {
      ++roots;
      if (!found) {
        found = true;
        lo = f == 0.0 ? r : grid(k - 1);
        hi = r;
        f_lo = f == 0.0 ? 0.0 : prev;
      }
    }
    prev = f;
  }
  if (!found) {
    throw Error(ErrorCode::NoRootInBracket, "NPV keeps its sign for rates in [-0.99, 10]");
  }
  result.multiple_roots = roots > 1;
  if (lo == hi || f_lo == 0.0) {
    result.rate = lo;
    return result;
  }
  // Bisect to the limit of double precision; this is well inside the
  // 1e-9 |C_0| NPV tolerance.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = npv(flows, mid);
    if (f == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
    }
  }
  const double f_hi = npv(flows, hi);
  result.rate = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
  return result;
}

DiscountSchedule DiscountSchedule::parse(std::string_view text) {
  DiscountSchedule s;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidConfig,
                "discount schedule '" + std::string(text) + "': " + why);
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) fail("empty entry");
    const std::size_t x = item.find('x');
    double rate = 0.0;
    long years = 1;
    const std::string_view rate_text = item.substr(0, x);
    auto [p, ec] = std::from_chars(rate_text.data(), rate_text.data() + rate_text.size(), rate);
    if (ec != std::errc{} || p != rate_text.data() + rate_text.size()) fail("bad rate");
    if (x != std::string_view::npos) {
      const std::string_view n = item.substr(x + 1);
      auto [q, ec2] = std::from_chars(n.data(), n.data() + n.size(), years);
      if (ec2 != std::errc{} || q != n.data() + n.size() || years < 1) fail("bad year count");
    }
    if (!(rate > -1.0) || !std::isfinite(rate)) fail("rates must exceed -1");
    s.rates.insert(s.rates.end(), static_cast<std::size_t>(years), rate);
    pos = comma + 1;
  }
  return s;
}

std::string DiscountSchedule::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < rates.size();) {
    std::size_t j = i;
    while (j < rates.size() && rates[j] == rates[i]) ++j;
    if (i > 0) out << ',';
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, rates[i]);
    out << std::string_view(buf, static_cast<std::size_t>(p - buf)) << 'x' << (j - i);
    i = j;
  }
  return out.str();
}

double DiscountSchedule::rate(std::size_t year) const {
  if (year < 1 || year > rates.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "discount schedule does not cover year " + std::to_string(year));
  }
  return rates[year - 1];
}

double lcos(const LcosInputs& in) {
  double cost = in.capex;
  double energy = 0.0;
  double factor = 1.0;
  for (std::size_t t = 0; t < in.years.size(); ++t) {
    const auto& y = in.years[t];
    if (y.energy_out < 0.0) throw Error(ErrorCode::DomainError, "delivered energy must be >= 0");
    factor *= 1.0 + in.discount.rate(t + 1);
    cost += (y.opex + y.capex_re + y.charge_cost - y.other_income) / factor;
    energy += y.energy_out / factor;
  }
  if (!(energy > 0.0)) throw Error(ErrorCode::ZeroEnergy, "no discounted energy delivered");
  return cost / energy;
}

LcosInputs lcos_inputs(const LifecycleLedger& ledger, const CostModel& costs,
                       const DiscountSchedule& discount) {
  if (ledger.rows.empty()) throw Error(ErrorCode::EmptyLedger, "ledger has no years");
  LcosInputs in;
  in.capex = costs.investment();
  in.discount = discount;
  for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
    const auto a = ledger.annual(i);
    in.years.push_back({a.cost_op, 0.0, a.energy_cost, 0.0, a.energy_out});
  }
  in.years.back().other_income = costs.income_rcy;
  return in;
}

}  // namespace bess
