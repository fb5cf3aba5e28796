#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "bess/lifecycle.hpp"

namespace bess {

/// Fixed investment costs and end-of-life recycling value.
struct CostModel {
  double cost_bat_pur = 0.0;  // $
  double cost_bat_exc = 0.0;  // $, replacement cost, also the degradation unit cost
  double cost_equ = 0.0;      // $
  double cost_sta = 0.0;      // $
  double k_dec = 4.0 / 11.0;
  double recycle_ratio_bat = 0.0;
  double recycle_ratio_equ = 0.4;
  double income_rcy = 0.0;    // $

  /// Throws InvalidConfig if any field is negative.
  void validate() const;
  double investment() const { return cost_bat_pur + cost_equ + cost_sta; }
};

/// k_dec * cost_bat_pur.
double replacement_cost(const CostModel& costs);
/// recycle_ratio_bat * cost_bat_pur + recycle_ratio_equ * cost_equ.
double recycling_income(const CostModel& costs);

/// Case-study costs with the derived replacement cost and recycling income.
CostModel lfp_costs();
CostModel ncm_costs();
/// "lfp" or "ncm"; throws InvalidArgument otherwise.
CostModel cost_preset(std::string_view chemistry);

/// C_0 .. C_n in $.
struct CashFlowSeries {
  std::vector<double> flows;
};

/// C_0 = -(battery + equipment + station); C_t = annual income - O&M;
/// C_n also receives the recycling income. Throws EmptyLedger.
CashFlowSeries build_cashflows(const LifecycleLedger& ledger, const CostModel& costs);

double npv(std::span<const double> flows, double rate);

struct IrrResult {
  double rate = 0.0;
  bool multiple_roots = false;  // more than one sign change in the scan
};

/// Smallest root on [-0.99, 10] found by a 0.01 scan and bisection. Throws
/// NoSignChange when the flows never change sign and NoRootInBracket when
/// NPV keeps its sign over the bracket.
IrrResult irr(std::span<const double> flows);

/// Per-year discount rates, year 1 first.
struct DiscountSchedule {
  std::vector<double> rates;

  /// Parses "0.08x5,0.07x5,0.06x40" (rate x years; a bare rate means one
  /// year). Throws InvalidConfig.
  static DiscountSchedule parse(std::string_view text);
  std::string to_string() const;
  double rate(std::size_t year) const;  // 1-based; throws InvalidArgument past the end
};

struct LcosYear {
  double opex = 0.0;
  double capex_re = 0.0;
  double charge_cost = 0.0;   // c_el * W_in
  double other_income = 0.0;  // R_t
  double energy_out = 0.0;    // MWh
};

struct LcosInputs {
  double capex = 0.0;
  std::vector<LcosYear> years;
  DiscountSchedule discount;
};

/// Discounted lifetime cost per discounted MWh delivered, with year t
/// discounted by the product of (1 + i_s) for s = 1..t. Throws ZeroEnergy.
double lcos(const LcosInputs& inputs);

/// LCOS inputs from a ledger: yearly O&M, charging cost and delivered energy,
/// recycling income in the final year.
LcosInputs lcos_inputs(const LifecycleLedger& ledger, const CostModel& costs,
                       const DiscountSchedule& discount);

}  // namespace bess
