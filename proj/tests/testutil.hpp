#ifndef OWC_TESTUTIL_HPP
#define OWC_TESTUTIL_HPP

#include <vector>

#include "owc/environment.hpp"
#include "owc/rng.hpp"
#include "owc/scenario.hpp"

namespace owc::testutil {

// Desk-scale instance: two ceiling LEDs in a small room, relaxed
// thresholds so feasible actions exist everywhere.
inline Scenario tiny_scenario(int users = 1, double eta = 1.0) {
  Scenario sc;
  sc.room = {4.0, 4.0, 3.0};
  sc.leds = {Luminaire{{1.5, 2.0, 3.0}, {0.0, 0.0, -1.0}},
             Luminaire{{2.5, 2.0, 3.0}, {0.0, 0.0, -1.0}}};
  sc.user_count = users;
  sc.user_min = {0.5, 0.5, 0.0};
  sc.user_max = {3.5, 3.5, 1.0};
  sc.device = DeviceConstants{60.0, 60.0, 1e-4, 1.5};
  sc.harvesting = HarvestingConstants{0.75, 25e-3, 1e-9};
  sc.power = PowerConstants{1.2, 1.0};
  sc.noise_variance_w = 1e-14;
  sc.thresholds = Thresholds{0.1, 20.0, 1e-12};
  sc.dimming = DimmingConfig{eta, 2, 0.0, 10e-3};
  sc.split_max = 6.0;
  return sc;
}

// Fixed single-point user box: training and the oracle share one channel.
inline Scenario pinned_tiny_scenario(int users = 1, double eta = 1.0) {
  Scenario sc = tiny_scenario(users, eta);
  sc.user_min = {1.8, 2.1, 0.5};
  sc.user_max = {1.8, 2.1, 0.5};
  if (users > 1) {
    sc.user_min = {1.2, 1.6, 0.2};
    sc.user_max = {1.2, 1.6, 0.2};
  }
  return sc;
}

inline std::vector<double> random_raw(const Environment& env, Rng& rng,
                                      double scale = 2.0) {
  std::vector<double> raw(env.raw_dim());
  for (auto& x : raw) x = rng.normal(0.0, scale);
  return raw;
}

}  // namespace owc::testutil

#endif
