#ifndef OWC_DIMMING_HPP
#define OWC_DIMMING_HPP

namespace owc {

// Joint-dimming configuration: target brightness plus the LED current range.
struct DimmingConfig {
  double target_level = 1.0;  // eta in (0, 1]
  int n_leds = 6;
  double current_min_a = 0.0;    // I_l
  double current_max_a = 10e-3;  // I_h

  // Midpoint bias I_0 = (I_l + I_h) / 2.
  double mid_bias() const { return 0.5 * (current_min_a + current_max_a); }

  void validate() const;  // throws std::invalid_argument
};

// Spatial dimming: N_a = round(eta * N), half away from zero, at least 1.
int active_led_count(const DimmingConfig& config);

struct BiasResult {
  double value = 0.0;  // i_DC
  bool clamped = false;
};

// Analog dimming: i_DC = eta*N*(I_0 - I_l)/N_a + I_l, clamped into
// [I_l, I_h] with the clamp flagged. Throws when n_active < 1.
BiasResult dc_bias(const DimmingConfig& config, int n_active);

// Per-LED modulation amplitude cap Xi = min(i_DC - I_l, I_h - i_DC).
double amplitude_budget(double dc_bias_a, const DimmingConfig& config);

// Checks the dimming identity eta = N_a (i_DC - I_l) / (N (I_0 - I_l))
// to the given relative tolerance.
bool verify_dimming_constraint(int n_active, double dc_bias_a,
                               const DimmingConfig& config,
                               double rel_tol = 1e-6);

// Achieved dimming fraction for a given (N_a, i_DC) pair.
double achieved_dimming(int n_active, double dc_bias_a,
                        const DimmingConfig& config);

struct DimmingState {
  int n_active = 1;
  double dc_bias_a = 0.0;
  double amplitude_budget_a = 0.0;
  bool bias_clamped = false;
};

DimmingState make_dimming_state(const DimmingConfig& config);

}  // namespace owc

#endif
