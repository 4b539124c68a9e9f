#include "owc/slipt.hpp"

#include <cmath>
#include <stdexcept>

namespace owc {

void HarvestingConstants::validate() const {
  if (!(fill_factor > 0.0 && fill_factor <= 1.0))
    throw std::invalid_argument("fill_factor must be in (0, 1]");
  if (!(thermal_voltage_v > 0.0))
    throw std::invalid_argument("thermal_voltage_v must be positive");
  if (!(dark_saturation_a > 0.0))
    throw std::invalid_argument("dark_saturation_a must be positive");
}

void PowerConstants::validate() const {
  if (!(amplifier_factor >= 1.0))
    throw std::invalid_argument("amplifier_factor must be >= 1");
  if (!(conversion_factor_w_per_a > 0.0))
    throw std::invalid_argument("conversion_factor_w_per_a must be positive");
}

double harvested_power(std::size_t user, const ChannelMatrix& channels,
                       const std::vector<int>& selection, double dc_bias_a,
                       const HarvestingConstants& constants,
                       bool log_active_only) {
  if (!(dc_bias_a >= 0.0))
    throw std::invalid_argument("dc bias must be nonnegative");
  double prefactor = 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < channels.leds; ++n) {
    const double contrib = channels.at(user, n) * dc_bias_a;
    if (selection[n])
      prefactor += constants.fill_factor * constants.thermal_voltage_v * contrib;
    if (!log_active_only || selection[n]) log_sum += contrib;
  }
  return prefactor * std::log(1.0 + log_sum / constants.dark_saturation_a);
}

double total_power(const Beamformers& beams, const std::vector<int>& selection,
                   double dc_bias_a, int n_active,
                   const std::vector<double>& harvested,
                   const PowerConstants& constants, PowerTermMode mode) {
  double beam_term = 0.0;
  for (std::size_t n = 0; n < beams.leds; ++n) {
    if (!selection[n]) continue;
    if (mode == PowerTermMode::Absolute) {
      double a = std::abs(beams.common[n]);
      for (std::size_t k = 0; k < beams.users; ++k)
        a += std::abs(beams.private_at(k, n));
      beam_term += a;
    } else {
      double w = beams.common[n];
      for (std::size_t k = 0; k < beams.users; ++k) w += beams.private_at(k, n);
      beam_term += mode == PowerTermMode::Squared ? w * w : w;
    }
  }
  double total = constants.amplifier_factor * beam_term +
                 constants.conversion_factor_w_per_a * n_active * dc_bias_a;
  for (double h : harvested) total -= h;
  return total;
}

double energy_efficiency(double aggregate_rate, double total_power) {
  if (!(total_power > 0.0))
    throw std::domain_error("energy efficiency needs positive total power");
  return aggregate_rate / total_power;
}

}  // namespace owc
