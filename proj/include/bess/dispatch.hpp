#pragma once

#include <span>
#include <vector>

#include "bess/degradation.hpp"
#include "bess/lp.hpp"
#include "bess/market_data.hpp"

namespace bess {

/// Physical and market parameters of the storage asset.
struct BatteryParams {
  double P_r = 10.0;       // MW
  double E_r = 20.0;       // MWh
  double E_min = 2.0;      // MWh
  double E_max = 18.0;     // MWh
  double eff_ch = 0.94;
  double eff_dch = 0.94;
  double r_self = 0.01;    // fraction lost per hour
  double t_res = 1.0;      // h of sustained reserve output
  double t_reg = 0.25;     // h of sustained regulation output
  double prob_res = 0.05;  // probability that reserve is deployed
  double e_reg = 0.10;     // MWh per MW of regulation per hour, each direction
  double score_perf = 0.9;
  double r_mileage = 2.8;
  double k_fix = 10.0;     // $/MW/day
  double k_var = 0.5;      // $/MWh
  double cost_bat_unit = 0.0;  // $ per full rated life consumed

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// Case-study asset: 10 MW / 20 MWh, 94% efficiencies, E_max at 90% of E_r.
BatteryParams case_study_battery();

/// Hourly prices over an arbitrary horizon. All spans have the same length.
struct PriceHorizon {
  std::span<const double> energy;
  std::span<const double> reg_cap;
  std::span<const double> reg_perf;
  std::span<const double> res;

  static PriceHorizon of(const MarketDay& day);
  std::size_t hours() const { return energy.size(); }
};

/// Variable indices of the daily program, per hour.
struct DispatchLayout {
  std::vector<int> cap_ch, cap_dch, cap_reg, cap_res;
  std::vector<int> soc;  // hours + 1 entries, soc[0] = e_0
  std::vector<int> delta_e;
  std::vector<int> throughput;  // v_t >= |e_t - e_{t-1}|
  std::vector<int> mode;        // b_t: 1 = charging allowed, 0 = discharging allowed
};

struct MilpProgram {
  lp::LinearProgram lp;
  DispatchLayout layout;
  int hours = 0;
  double degradation_cost_per_mwh = 0.0;  // objective weight on v_t
};

struct DispatchSolution {
  std::vector<double> cap_ch, cap_dch, cap_reg, cap_res;
  std::vector<int> mode_b;
  std::vector<double> soc;      // hours + 1 entries
  std::vector<double> delta_e;  // net traded energy per hour
  std::vector<double> throughput;
  double objective = 0.0;
  int nodes = 0;
  int lp_iterations = 0;

  std::size_t hours() const { return cap_ch.size(); }
};

struct DailyResult {
  double income_energy = 0.0;
  double income_reg = 0.0;
  double income_res = 0.0;
  double cost_op_fix = 0.0;
  double cost_op_var = 0.0;
  double cap_loss = 0.0;   // fraction of rated cycle life consumed
  double cost_loss = 0.0;
  double gross_income = 0.0;
  HalfCycleList half_cycles;

  double cost_op() const { return cost_op_fix + cost_op_var; }
  double objective() const { return gross_income - cost_op() - cost_loss; }
};

/// Energy exchanged with the grid over the day, used for LCOS.
struct EnergyFlows {
  double energy_out = 0.0;     // MWh delivered
  double energy_in = 0.0;      // MWh absorbed
  double purchase_cost = 0.0;  // $ paid for charging energy
};

/// Degradation-aware profit maximisation for one day. Requires
/// alpha_cycle == 1 so the throughput surrogate stays linear.
MilpProgram build_daily_program(const MarketDay& day, const BatteryParams& battery,
                                const DegradationParams& degradation);
MilpProgram build_program(const PriceHorizon& prices, const BatteryParams& battery,
                          const DegradationParams& degradation);

struct SolveOptions {
  double rel_gap = 1e-9;  // prune nodes whose bound is within this of the incumbent
  double complementarity_tol = 1e-9;
  long max_nodes = 200000;
  lp::Options lp{};
};

/// Best-first branch and bound over the hourly mode binaries.
DispatchSolution solve_daily(const MilpProgram& program, const SolveOptions& options = {});

/// Recomputes every income and cost term from the schedule, extracts the
/// half cycles and checks the result against the solver objective. Throws
/// ObjectiveMismatch when they disagree by more than 1e-6 relative.
DailyResult evaluate_solution(const DispatchSolution& sol, const PriceHorizon& prices,
                              const BatteryParams& battery, const DegradationParams& degradation);
DailyResult evaluate_solution(const DispatchSolution& sol, const MarketDay& day,
                              const BatteryParams& battery, const DegradationParams& degradation);

EnergyFlows energy_flows(const DispatchSolution& sol, const PriceHorizon& prices,
                         const BatteryParams& battery);

/// Build, solve and evaluate in one call.
DailyResult simulate_day(const MarketDay& day, const BatteryParams& battery,
                         const DegradationParams& degradation, DispatchSolution* solution = nullptr);

}  // namespace bess
