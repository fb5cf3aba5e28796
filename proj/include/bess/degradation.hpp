#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace bess {

/// Cycle-ageing model parameters: the stress-factor SOH fit (β ... mSOC_ref)
/// and its Miner's-rule reduction f(d) = d^alpha_cycle / n_100.
struct DegradationParams {
  double beta = 0.0;
  double k_T = 0.0;
  double k_DoD = 0.0;   // per percent DoD
  double k_C_ch = 0.0;  // per C-rate
  double k_C_dch = 0.0;
  double k_mSOC = 0.0;  // per percent mSOC (b_mSOC)
  double alpha_opt = 1.0;
  double T_ref = 293.0;     // K
  double mSOC_ref = 42.0;   // percent
  double n_100 = 1.0;       // cycles to end of life at 100% DoD
  double alpha_cycle = 1.0;
  double soh_eol = 80.0;    // SOH (percent) at which n_100 is defined

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  /// Capacity fraction lost when one full rated cycle life is consumed.
  double capacity_per_life() const { return (100.0 - soh_eol) / 100.0; }
};

DegradationParams lfp_degradation();
DegradationParams ncm_degradation();
/// "lfp" or "ncm"; throws InvalidArgument otherwise.
DegradationParams degradation_preset(std::string_view chemistry);

struct StressPoint {
  double T = 303.15;   // K
  double DoD = 100.0;  // percent
  double C_ch = 0.5;
  double C_dch = 0.5;
  double mSOC = 50.0;  // percent
  double FEC = 0.0;

  void validate() const;
};

/// Depths of the monotone half cycles of a SoC trajectory, as fractions of
/// the rated energy. Every entry lies in (0, 1].
struct HalfCycleList {
  std::vector<double> cycles;

  bool operator==(const HalfCycleList&) const = default;
};

/// State of health in percent from the full stress-factor model.
double soh_full(const DegradationParams& p, const StressPoint& s);

/// N_d = n_100 / d^alpha_cycle. Throws DomainError unless 0 < d <= 1.
double cycle_life(const DegradationParams& p, double d);

/// d^alpha_cycle / n_100, zero at d = 0. Throws DomainError outside [0, 1].
double per_cycle_loss(const DegradationParams& p, double d);

/// Splits the trajectory at its turning points. Plateaus join the segment
/// they continue; zero-amplitude segments are dropped. Throws SocOutOfRange
/// when a sample lies outside [0, rated_energy].
HalfCycleList extract_half_cycles(std::span<const double> soc, double rated_energy);

/// Sum over half cycles of 0.5 * d^alpha_cycle / n_100 (fraction of rated
/// cycle life consumed).
double capacity_loss(const HalfCycleList& half_cycles, const DegradationParams& p);

/// Full equivalent cycles at 100% DoD after which soh_full reaches
/// `soh_floor`, for the given stress (its DoD and FEC fields are ignored).
/// Throws NoRoot if the floor is not reached for FEC <= 1e9.
double solve_n100_from_soh(const DegradationParams& p, const StressPoint& stress,
                           double soh_floor);

}  // namespace bess
