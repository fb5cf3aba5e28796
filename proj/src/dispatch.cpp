#include "bess/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "bess/error.hpp"

namespace bess {

using lp::Sense;
using lp::Term;

void BatteryParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::DomainError, std::string("battery: ") + what);
  };
  require(P_r >= 0.0, "P_r must be >= 0");
  require(E_r > 0.0, "E_r must be positive");
  require(eff_ch > 0.0 && eff_ch <= 1.0, "eff_ch must lie in (0, 1]");
  require(eff_dch > 0.0 && eff_dch <= 1.0, "eff_dch must lie in (0, 1]");
  require(r_self >= 0.0 && r_self < 1.0, "r_self must lie in [0, 1)");
  require(E_min >= 0.0 && E_min < E_max && E_max <= E_r, "need 0 <= E_min < E_max <= E_r");
  require(prob_res >= 0.0 && prob_res <= 1.0, "prob_res must lie in [0, 1]");
  require(score_perf >= 0.0 && score_perf <= 1.0, "score_perf must lie in [0, 1]");
  require(t_res > 0.0 && t_reg > 0.0, "t_res and t_reg must be positive");
  require(e_reg >= 0.0, "e_reg must be >= 0");
  require(r_mileage >= 0.0, "r_mileage must be >= 0");
  require(k_fix >= 0.0 && k_var >= 0.0, "O&M unit costs must be >= 0");
  require(cost_bat_unit >= 0.0, "cost_bat_unit must be >= 0");
}

BatteryParams case_study_battery() {
  BatteryParams b;
  b.P_r = 10.0;
  b.E_r = 20.0;
  b.E_max = 0.9 * b.E_r;
  b.E_min = 0.1 * b.E_r;
  return b;
}

PriceHorizon PriceHorizon::of(const MarketDay& day) {
  return {day.price_energy, day.price_reg_cap, day.price_reg_perf, day.price_res};
}

MilpProgram build_daily_program(const MarketDay& day, const BatteryParams& battery,
                                const DegradationParams& degradation) {
  validate(day);
  return build_program(PriceHorizon::of(day), battery, degradation);
}

MilpProgram build_program(const PriceHorizon& prices, const BatteryParams& b,
                          const DegradationParams& d) {
  const std::size_t H = prices.hours();
  if (prices.reg_cap.size() != H || prices.reg_perf.size() != H || prices.res.size() != H) {
    throw Error(ErrorCode::InvalidArgument, "price series differ in length");
  }
  if (H == 0) throw Error(ErrorCode::InvalidArgument, "empty horizon");
  if (b.E_min == b.E_max) {
    throw Error(ErrorCode::InfeasibleParams, "E_min == E_max leaves no energy headroom");
  }
  b.validate();
  d.validate();
  if (d.alpha_cycle != 1.0) {
    throw Error(ErrorCode::DomainError, "the dispatch program needs alpha_cycle == 1");
  }

  constexpr double dt = 1.0;
  MilpProgram prog;
  prog.hours = static_cast<int>(H);
  auto& lp = prog.lp;
  auto& L = prog.layout;
  prog.degradation_cost_per_mwh = b.cost_bat_unit / (2.0 * b.E_r * d.n_100);

  L.soc.push_back(lp.add_variable(b.E_min, b.E_max, 0.0));
  for (std::size_t t = 0; t < H; ++t) {
    const double pe = prices.energy[t];
    const double reg_value =
        (prices.reg_cap[t] + prices.reg_perf[t] * b.r_mileage) * b.score_perf;
    L.cap_ch.push_back(lp.add_variable(0.0, b.P_r, (-pe - b.k_var) * dt));
    L.cap_dch.push_back(lp.add_variable(0.0, b.P_r, (pe - b.k_var) * dt));
    L.cap_reg.push_back(lp.add_variable(0.0, b.P_r, reg_value - 2.0 * b.e_reg * b.k_var * dt));
    L.cap_res.push_back(lp.add_variable(
        0.0, b.P_r, prices.res[t] + pe * b.prob_res - b.k_var * b.prob_res * dt));
    L.soc.push_back(lp.add_variable(b.E_min, b.E_max, 0.0));
    L.delta_e.push_back(lp.add_variable(-lp::kInf, lp::kInf, 0.0));
    L.throughput.push_back(lp.add_variable(0.0, lp::kInf, -prog.degradation_cost_per_mwh));
    L.mode.push_back(lp.add_variable(0.0, 1.0, 0.0));
  }
  lp.set_objective_offset(-b.k_fix * b.P_r);

  const double P = b.P_r;
  for (std::size_t t = 0; t < H; ++t) {
    const int ch = L.cap_ch[t], dch = L.cap_dch[t], reg = L.cap_reg[t], res = L.cap_res[t];
    const int e = L.soc[t + 1], e_prev = L.soc[t], de = L.delta_e[t], v = L.throughput[t];
    const int mode = L.mode[t];

    // Capacity limits; the mode binary gates charge against discharge.
    lp.add_row({{dch, 1.0}, {mode, P}}, Sense::LessEqual, P);
    lp.add_row({{ch, 1.0}, {mode, -P}}, Sense::LessEqual, 0.0);
    lp.add_row({{reg, 1.0}}, Sense::LessEqual, P);
    lp.add_row({{res, 1.0}}, Sense::LessEqual, P);
    lp.add_row({{dch, 1.0}, {reg, 1.0}, {res, 1.0}}, Sense::LessEqual, P);
    lp.add_row({{ch, 1.0}, {reg, 1.0}}, Sense::LessEqual, P);

    // Sustained-delivery headroom.
    lp.add_row({{dch, dt / b.eff_dch}, {res, b.t_res / b.eff_dch}, {reg, b.t_reg / b.eff_dch},
                {e, -1.0}},
               Sense::LessEqual, 0.0);
    lp.add_row({{e, 1.0}, {ch, dt * b.eff_ch}, {reg, b.t_reg * b.eff_ch}}, Sense::LessEqual,
               b.E_max);

    // Net traded energy and the SoC recursion with per-hour self-discharge.
    const double reg_loss = b.e_reg / b.eff_dch - b.e_reg * b.eff_ch;
    lp.add_row({{de, 1.0},
                {ch, -b.eff_ch * dt},
                {dch, dt / b.eff_dch},
                {res, b.prob_res * dt / b.eff_dch},
                {reg, reg_loss * dt}},
               Sense::Equal, 0.0);
    lp.add_row({{e, 1.0}, {e_prev, -(1.0 - b.r_self)}, {de, -1.0}}, Sense::Equal, 0.0);

    // Throughput bound |e_t - e_{t-1}| <= v_t.
    lp.add_row({{v, 1.0}, {e, -1.0}, {e_prev, 1.0}}, Sense::GreaterEqual, 0.0);
    lp.add_row({{v, 1.0}, {e, 1.0}, {e_prev, -1.0}}, Sense::GreaterEqual, 0.0);
  }
  lp.add_row({{L.soc.front(), 1.0}}, Sense::Equal, b.E_min);
  lp.add_row({{L.soc.back(), 1.0}}, Sense::Equal, b.E_min);
  return prog;
}

namespace {

struct Node {
  double bound;
  long seq;
  std::vector<signed char> fixed;  // -1 free, 0 or 1 fixed mode
  std::vector<double> x;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.seq > b.seq;
  }
};

lp::Result solve_with_modes(const MilpProgram& prog, const std::vector<signed char>& fixed,
                            const lp::Options& opt) {
  lp::LinearProgram lp = prog.lp;
  for (std::size_t t = 0; t < fixed.size(); ++t) {
    if (fixed[t] >= 0) lp.set_bounds(prog.layout.mode[t], fixed[t], fixed[t]);
  }
  return lp::solve(lp, opt);
}

// Lowest hour whose LP solution charges and discharges at once, or -1.
int violated_hour(const MilpProgram& prog, const std::vector<double>& x, double tol) {
  for (int t = 0; t < prog.hours; ++t) {
    if (x[prog.layout.cap_ch[t]] > tol && x[prog.layout.cap_dch[t]] > tol) return t;
  }
  return -1;
}

// Mode assignment consistent with an LP solution that has no violated hour.
std::vector<signed char> repair_modes(const MilpProgram& prog, const std::vector<double>& x,
                                      double tol) {
  std::vector<signed char> modes(static_cast<std::size_t>(prog.hours));
  for (int t = 0; t < prog.hours; ++t) {
    const double ch = x[prog.layout.cap_ch[t]];
    const double dch = x[prog.layout.cap_dch[t]];
    if (ch > tol) {
      modes[t] = 1;
    } else if (dch > tol) {
      modes[t] = 0;
    } else {
      modes[t] = x[prog.layout.mode[t]] >= 0.5 ? 1 : 0;
    }
  }
  return modes;
}

DispatchSolution extract(const MilpProgram& prog, const std::vector<double>& x,
                         const std::vector<signed char>& modes, double objective) {
  const auto& L = prog.layout;
  DispatchSolution s;
  auto take = [&](const std::vector<int>& idx) {
    std::vector<double> v;
    v.reserve(idx.size());
    for (int j : idx) v.push_back(x[static_cast<std::size_t>(j)]);
    return v;
  };
  s.cap_ch = take(L.cap_ch);
  s.cap_dch = take(L.cap_dch);
  s.cap_reg = take(L.cap_reg);
  s.cap_res = take(L.cap_res);
  s.soc = take(L.soc);
  s.delta_e = take(L.delta_e);
  s.throughput = take(L.throughput);
  s.mode_b.assign(modes.begin(), modes.end());
  for (std::size_t t = 0; t < s.hours(); ++t) {
    // The gated side is fixed at zero by presolve; clear rounding residue on
    // the other bids.
    (s.mode_b[t] == 1 ? s.cap_dch[t] : s.cap_ch[t]) = 0.0;
    // With a zero degradation price the LP leaves v_t anywhere above |Δe|.
    if (prog.degradation_cost_per_mwh == 0.0) {
      s.throughput[t] = std::abs(s.soc[t + 1] - s.soc[t]);
    }
  }
  s.objective = objective;
  return s;
}

}  // namespace

DispatchSolution solve_daily(const MilpProgram& prog, const SolveOptions& options) {
  const std::size_t H = static_cast<std::size_t>(prog.hours);
  const double tol = options.complementarity_tol;
  long seq = 0;
  int lp_iterations = 0;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  {
    std::vector<signed char> free_modes(H, -1);
    auto root = solve_with_modes(prog, free_modes, options.lp);
    lp_iterations += root.iterations;
    if (root.status == lp::Status::Infeasible) {
      throw Error(ErrorCode::Infeasible, "daily program has no feasible schedule");
    }
    if (root.status == lp::Status::Unbounded) {
      throw Error(ErrorCode::Unbounded, "daily program is unbounded (modelling error)");
    }
    open.push({root.objective, seq++, std::move(free_modes), std::move(root.x)});
  }

  bool have_incumbent = false;
  double incumbent = -lp::kInf;
  std::vector<double> best_x;
  std::vector<signed char> best_modes;
  int nodes = 0;

  auto prunable = [&](double bound) {
    return have_incumbent &&
           bound <= incumbent + options.rel_gap * std::max(1.0, std::abs(incumbent));
  };

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    ++nodes;
    if (prunable(node.bound)) continue;
    if (nodes > options.max_nodes) {
      throw Error(ErrorCode::Infeasible, "branch and bound node limit reached");
    }

    const int t = violated_hour(prog, node.x, tol);
    if (t < 0) {
      auto modes = repair_modes(prog, node.x, tol);
      auto fixed_lp = solve_with_modes(prog, modes, options.lp);
      lp_iterations += fixed_lp.iterations;
      if (fixed_lp.status == lp::Status::Optimal &&
          (!have_incumbent || fixed_lp.objective > incumbent)) {
        have_incumbent = true;
        incumbent = fixed_lp.objective;
        best_x = std::move(fixed_lp.x);
        best_modes = std::move(modes);
      }
      continue;
    }

    for (signed char value : {static_cast<signed char>(1), static_cast<signed char>(0)}) {
      auto fixed = node.fixed;
      fixed[static_cast<std::size_t>(t)] = value;
      auto child = solve_with_modes(prog, fixed, options.lp);
      lp_iterations += child.iterations;
      if (child.status != lp::Status::Optimal || prunable(child.objective)) continue;
      open.push({child.objective, seq++, std::move(fixed), std::move(child.x)});
    }
  }

  if (!have_incumbent) {
    throw Error(ErrorCode::Infeasible, "no schedule satisfies the mode constraints");
  }
  DispatchSolution sol = extract(prog, best_x, best_modes, incumbent);
  sol.nodes = nodes;
  sol.lp_iterations = lp_iterations;
  return sol;
}

DailyResult evaluate_solution(const DispatchSolution& sol, const PriceHorizon& prices,
                              const BatteryParams& b, const DegradationParams& d) {
  const std::size_t H = sol.hours();
  if (prices.hours() != H || sol.soc.size() != H + 1) {
    throw Error(ErrorCode::InvalidArgument, "solution and prices cover different horizons");
  }
  DailyResult r;
  for (std::size_t t = 0; t < H; ++t) {
    const double pe = prices.energy[t];
    r.income_energy += pe * (sol.cap_dch[t] - sol.cap_ch[t]);
    r.income_reg += prices.reg_cap[t] * sol.cap_reg[t] * b.score_perf +
                    prices.reg_perf[t] * sol.cap_reg[t] * b.r_mileage * b.score_perf;
    r.income_res += prices.res[t] * sol.cap_res[t] + pe * sol.cap_res[t] * b.prob_res;
    r.cost_op_var += b.k_var * (sol.cap_dch[t] + sol.cap_ch[t] + b.prob_res * sol.cap_res[t] +
                                2.0 * b.e_reg * sol.cap_reg[t]);
  }
  r.cost_op_fix = b.k_fix * b.P_r;
  r.gross_income = r.income_energy + r.income_reg + r.income_res;
  r.half_cycles = extract_half_cycles(sol.soc, b.E_r);
  r.cap_loss = capacity_loss(r.half_cycles, d);
  r.cost_loss = b.cost_bat_unit * r.cap_loss;

  const double recomputed = r.objective();
  if (std::abs(recomputed - sol.objective) > 1e-6 * (1.0 + std::abs(sol.objective))) {
    throw Error(ErrorCode::ObjectiveMismatch,
                "recomputed objective " + std::to_string(recomputed) + " vs solver " +
                    std::to_string(sol.objective));
  }
  return r;
}

DailyResult evaluate_solution(const DispatchSolution& sol, const MarketDay& day,
                              const BatteryParams& battery, const DegradationParams& degradation) {
  return evaluate_solution(sol, PriceHorizon::of(day), battery, degradation);
}

EnergyFlows energy_flows(const DispatchSolution& sol, const PriceHorizon& prices,
                         const BatteryParams& b) {
  EnergyFlows f;
  for (std::size_t t = 0; t < sol.hours(); ++t) {
    const double reg_energy = b.e_reg * sol.cap_reg[t];
    f.energy_out += sol.cap_dch[t] + b.prob_res * sol.cap_res[t] + reg_energy;
    f.energy_in += sol.cap_ch[t] + reg_energy;
    f.purchase_cost += prices.energy[t] * sol.cap_ch[t];
  }
  return f;
}

DailyResult simulate_day(const MarketDay& day, const BatteryParams& battery,
                         const DegradationParams& degradation, DispatchSolution* solution) {
  const auto program = build_daily_program(day, battery, degradation);
  auto sol = solve_daily(program);
  auto result = evaluate_solution(sol, day, battery, degradation);
  if (solution) *solution = std::move(sol);
  return result;
}

}  // namespace bess
