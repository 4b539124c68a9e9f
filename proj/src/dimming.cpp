#include "owc/dimming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owc {

void DimmingConfig::validate() const {
  if (!(target_level > 0.0 && target_level <= 1.0))
    throw std::invalid_argument("dimming target_level must be in (0, 1]");
  if (n_leds < 1) throw std::invalid_argument("n_leds must be >= 1");
  if (!(current_min_a < current_max_a))
    throw std::invalid_argument("current_min_a must be below current_max_a");
}

int active_led_count(const DimmingConfig& config) {
  // Round half away from zero; glaring zero LEDs would leave the system
  // undefined, so at least one stays on.
  const long rounded = std::lround(config.target_level * config.n_leds);
  return static_cast<int>(std::clamp<long>(rounded, 1, config.n_leds));
}

BiasResult dc_bias(const DimmingConfig& config, int n_active) {
  if (n_active < 1) throw std::invalid_argument("n_active must be >= 1");
  const double i0 = config.mid_bias();
  const double raw = config.target_level * config.n_leds *
                         (i0 - config.current_min_a) / n_active +
                     config.current_min_a;
  BiasResult out;
  out.value = std::clamp(raw, config.current_min_a, config.current_max_a);
  out.clamped = out.value != raw;
  return out;
}

double amplitude_budget(double dc_bias_a, const DimmingConfig& config) {
  return std::min(dc_bias_a - config.current_min_a,
                  config.current_max_a - dc_bias_a);
}

double achieved_dimming(int n_active, double dc_bias_a,
                        const DimmingConfig& config) {
  return n_active * (dc_bias_a - config.current_min_a) /
         (config.n_leds * (config.mid_bias() - config.current_min_a));
}

bool verify_dimming_constraint(int n_active, double dc_bias_a,
                               const DimmingConfig& config, double rel_tol) {
  const double achieved = achieved_dimming(n_active, dc_bias_a, config);
  return std::abs(achieved - config.target_level) <=
         rel_tol * config.target_level;
}

DimmingState make_dimming_state(const DimmingConfig& config) {
  config.validate();
  DimmingState state;
  state.n_active = active_led_count(config);
  const BiasResult bias = dc_bias(config, state.n_active);
  state.dc_bias_a = bias.value;
  state.bias_clamped = bias.clamped;
  state.amplitude_budget_a = amplitude_budget(bias.value, config);
  return state;
}

}  // namespace owc
