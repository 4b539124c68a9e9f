#ifndef OWC_SCENARIO_HPP
#define OWC_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "owc/dimming.hpp"
#include "owc/geometry.hpp"
#include "owc/rng.hpp"
#include "owc/slipt.hpp"

namespace owc {

enum class Scheme { Rsma, Noma };

enum class RewardMode { AsPaper, Penalty };

struct Thresholds {
  double qos = 3.0;          // bits/s/Hz per user
  double p_max_w = 20.0;     // LED-array power budget
  double p_har_min_w = 1e-8;  // per-user harvesting floor
};

// Full static description of one experiment instance.
struct Scenario {
  Vec3 room{8.0, 8.0, 3.0};
  std::vector<Luminaire> leds;
  int user_count = 4;
  Vec3 user_min{0.0, 0.0, 0.0};
  Vec3 user_max{8.0, 8.0, 1.0};
  Vec3 pd_orientation{0.0, 0.0, 1.0};

  DeviceConstants device;
  HarvestingConstants harvesting;
  PowerConstants power;
  double noise_variance_w = 1e-14;
  Thresholds thresholds;
  DimmingConfig dimming;

  Scheme scheme = Scheme::Rsma;
  std::uint64_t seed = 1;
  int episode_length = 64;

  RewardMode reward_mode = RewardMode::AsPaper;
  double penalty_weight = 1.0;
  double split_max = 8.0;             // cap of the r* projection
  double constraint_rel_tol = 1e-9;   // slack for C1-C4, C7
  double dimming_rel_tol = 1e-6;      // slack for C6
  PowerTermMode power_term_mode = PowerTermMode::Absolute;
  bool eh_log_active_only = false;
  bool augment_state_with_channels = false;

  std::size_t led_count() const { return leds.size(); }

  // Throws std::invalid_argument with a description of the first violation.
  void validate() const;
};

// Table-I parameters in an 8x8x3 room: six ceiling LEDs in a 3x2 grid,
// 2 m apart along x and 4 m apart along y, placed symmetrically about the
// room center.
Scenario default_scenario();

// Draws user_count photodiode positions uniformly inside the user bounds.
std::vector<Photodiode> sample_user_positions(const Scenario& scenario,
                                              Rng& rng);

ChannelMatrix channel_matrix_for(const Scenario& scenario,
                                 const std::vector<Photodiode>& users);

std::string to_string(Scheme s);
std::string to_string(RewardMode m);
std::string to_string(PowerTermMode m);

}  // namespace owc

#endif
