#ifndef OWC_SLIPT_HPP
#define OWC_SLIPT_HPP

#include <cstddef>
#include <vector>

#include "owc/geometry.hpp"
#include "owc/rates.hpp"

namespace owc {

// Solar-cell harvesting constants.
struct HarvestingConstants {
  double fill_factor = 0.75;      // tau
  double thermal_voltage_v = 25e-3;
  double dark_saturation_a = 1e-9;

  void validate() const;
};

struct PowerConstants {
  double amplifier_factor = 1.2;        // zeta >= 1
  double conversion_factor_w_per_a = 1.0;  // phi

  void validate() const;
};

// How beam weights enter the consumed-power sum. The printed form uses the
// raw signed weights, which lets sign flips reduce the total; absolute is
// the default.
enum class PowerTermMode { AsPrinted, Absolute, Squared };

// Harvested power at one user:
//   [sum_n tau a_n V_t h_{k,n} i_DC] * ln(1 + sum_n h_{k,n} i_DC / I_s).
// The log argument sums over all LEDs as printed; `log_active_only`
// restricts it to active LEDs instead.
double harvested_power(std::size_t user, const ChannelMatrix& channels,
                       const std::vector<int>& selection, double dc_bias_a,
                       const HarvestingConstants& constants,
                       bool log_active_only = false);

// Total consumed optical power:
//   zeta * sum_n a_n (w_n^c + sum_k w_{k,n}^p) + phi N_a i_DC - sum_k P_k^Har
// with the beam term shaped by `mode`.
double total_power(const Beamformers& beams, const std::vector<int>& selection,
                   double dc_bias_a, int n_active,
                   const std::vector<double>& harvested,
                   const PowerConstants& constants,
                   PowerTermMode mode = PowerTermMode::Absolute);

// R^Agg / P^tot. Throws std::domain_error when total_power <= 0.
double energy_efficiency(double aggregate_rate, double total_power);

}  // namespace owc

#endif
