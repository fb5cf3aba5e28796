#include "bess/degradation.hpp"

#include <cmath>
#include <string>

#include "bess/error.hpp"

namespace bess {

void DegradationParams::validate() const {
  if (!(n_100 > 0.0)) throw Error(ErrorCode::DomainError, "n_100 must be positive");
  if (!(alpha_cycle > 0.0)) throw Error(ErrorCode::DomainError, "alpha_cycle must be positive");
  if (!(T_ref > 0.0)) throw Error(ErrorCode::DomainError, "T_ref must be positive");
  if (!(mSOC_ref > 0.0 && mSOC_ref <= 100.0)) {
    throw Error(ErrorCode::DomainError, "mSOC_ref must lie in (0, 100]");
  }
  if (!(soh_eol > 0.0 && soh_eol < 100.0)) {
    throw Error(ErrorCode::DomainError, "soh_eol must lie in (0, 100)");
  }
}

DegradationParams lfp_degradation() {
  DegradationParams p;
  p.beta = 0.003414;
  p.k_T = 5.8755;
  p.k_DoD = -0.0046;
  p.k_C_ch = 0.1038;
  p.k_C_dch = 0.296;
  p.k_mSOC = 0.0513;
  p.alpha_opt = 0.869;
  p.T_ref = 293.0;
  p.mSOC_ref = 42.0;
  p.n_100 = 13627.0;
  p.alpha_cycle = 1.0;
  return p;
}

DegradationParams ncm_degradation() {
  DegradationParams p;
  p.beta = 0.001673;
  p.k_T = 21.6745;
  p.k_DoD = 0.022;
  p.k_C_ch = 0.2533;
  p.k_C_dch = 0.1571;
  p.k_mSOC = -0.0212;
  p.alpha_opt = 0.915;
  p.T_ref = 293.0;
  p.mSOC_ref = 42.0;
  p.n_100 = 10420.0;
  p.alpha_cycle = 1.0;
  return p;
}

DegradationParams degradation_preset(std::string_view chemistry) {
  if (chemistry == "lfp") return lfp_degradation();
  if (chemistry == "ncm") return ncm_degradation();
  throw Error(ErrorCode::InvalidArgument,
              "unknown chemistry '" + std::string(chemistry) + "', expected lfp|ncm");
}

void StressPoint::validate() const {
  if (!(FEC >= 0.0)) throw Error(ErrorCode::DomainError, "FEC must be >= 0");
  if (!(DoD >= 0.0 && DoD <= 100.0)) throw Error(ErrorCode::DomainError, "DoD must lie in [0, 100]");
  if (!(mSOC >= 0.0 && mSOC <= 100.0)) {
    throw Error(ErrorCode::DomainError, "mSOC must lie in [0, 100]");
  }
  if (!(C_ch >= 0.0 && C_dch >= 0.0)) throw Error(ErrorCode::DomainError, "C-rates must be >= 0");
  if (!(T > 0.0)) throw Error(ErrorCode::DomainError, "temperature must be positive");
}

namespace {

// Everything in the SOH fit except the FEC^alpha_opt factor.
double stress_factor(const DegradationParams& p, const StressPoint& s) {
  const double arrhenius = p.k_T * (s.T - p.T_ref) / s.T;
  const double exponent = arrhenius + p.k_DoD * s.DoD + p.k_C_ch * s.C_ch + p.k_C_dch * s.C_dch;
  const double msoc = 1.0 + p.k_mSOC * s.mSOC * (1.0 - s.mSOC / (2.0 * p.mSOC_ref));
  return p.beta * std::exp(exponent) * msoc;
}

}  // namespace

double soh_full(const DegradationParams& p, const StressPoint& s) {
  s.validate();
  return 100.0 - stress_factor(p, s) * std::pow(s.FEC, p.alpha_opt);
}

double cycle_life(const DegradationParams& p, double d) {
  if (!(d > 0.0 && d <= 1.0)) {
    throw Error(ErrorCode::DomainError, "depth of discharge must lie in (0, 1]");
  }
  return p.n_100 / std::pow(d, p.alpha_cycle);
}

double per_cycle_loss(const DegradationParams& p, double d) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw Error(ErrorCode::DomainError, "depth of discharge must lie in [0, 1]");
  }
  if (d == 0.0) return 0.0;
  return std::pow(d, p.alpha_cycle) / p.n_100;
}

HalfCycleList extract_half_cycles(std::span<const double> soc, double rated_energy) {
  if (!(rated_energy > 0.0)) {
    throw Error(ErrorCode::DomainError, "rated energy must be positive");
  }
  // Solver output may sit a rounding error outside the box.
  const double slack = 1e-9 * rated_energy;
  for (std::size_t t = 0; t < soc.size(); ++t) {
    if (!(soc[t] >= -slack && soc[t] <= rated_energy + slack)) {
      throw Error(ErrorCode::SocOutOfRange,
                  "SoC sample " + std::to_string(t) + " outside [0, E_r]");
    }
  }

  HalfCycleList out;
  if (soc.size() < 2) return out;

  auto emit = [&](double from, double to) {
    const double depth = std::abs(to - from) / rated_energy;
    if (depth > 0.0) out.cycles.push_back(std::min(depth, 1.0));
  };

  int direction = 0;  // +1 rising, -1 falling, 0 not yet known
  double segment_start = soc[0];
  for (std::size_t t = 1; t < soc.size(); ++t) {
    const double step = soc[t] - soc[t - 1];
    const int dir = step > 0.0 ? 1 : (step < 0.0 ? -1 : 0);
    if (dir == 0) continue;
    if (direction != 0 && dir != direction) {
      emit(segment_start, soc[t - 1]);
      segment_start = soc[t - 1];
    }
    direction = dir;
  }
  emit(segment_start, soc.back());
  return out;
}

double capacity_loss(const HalfCycleList& half_cycles, const DegradationParams& p) {
  double total = 0.0;
  for (double d : half_cycles.cycles) total += 0.5 * std::pow(d, p.alpha_cycle) / p.n_100;
  return total;
}

double solve_n100_from_soh(const DegradationParams& p, const StressPoint& stress,
                           double soh_floor) {
  if (!(soh_floor > 0.0 && soh_floor < 100.0)) {
    throw Error(ErrorCode::DomainError, "SOH floor must lie in (0, 100)");
  }
  StressPoint s = stress;
  s.DoD = 100.0;
  s.FEC = 0.0;
  s.validate();

  constexpr double kMaxFec = 1e9;
  auto gap = [&](double fec) {
    s.FEC = fec;
    return soh_full(p, s) - soh_floor;  // decreasing in fec
  };

  if (gap(kMaxFec) > 0.0) {
    throw Error(ErrorCode::NoRoot, "SOH stays above the floor for FEC <= 1e9");
  }
  // Bracket by doubling from one cycle, then bisect.
  double lo = 0.0;
  double hi = 1.0;
  while (gap(hi) > 0.0) {
    lo = hi;
    hi = std::min(2.0 * hi, kMaxFec);
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = gap(mid);
    if (g == 0.0) return mid;
    (g > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bess
