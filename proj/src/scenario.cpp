#include "owc/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace owc {

namespace {

bool inside_room(const Vec3& p, const Vec3& room) {
  return p.x >= 0.0 && p.x <= room.x && p.y >= 0.0 && p.y <= room.y &&
         p.z >= 0.0 && p.z <= room.z;
}

bool finite(const Vec3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace

void Scenario::validate() const {
  if (!(room.x > 0.0 && room.y > 0.0 && room.z > 0.0))
    throw std::invalid_argument("room extents must be positive");
  if (leds.empty()) throw std::invalid_argument("scenario needs LEDs");
  for (const auto& led : leds) {
    if (!finite(led.position) || !inside_room(led.position, room))
      throw std::invalid_argument("LED position outside the room");
    if (norm(led.orientation) == 0.0)
      throw std::invalid_argument("LED orientation must be nonzero");
  }
  if (user_count < 1) throw std::invalid_argument("user_count must be >= 1");
  if (!finite(user_min) || !finite(user_max) ||
      !inside_room(user_min, room) || !inside_room(user_max, room))
    throw std::invalid_argument("user bounds outside the room");
  if (user_min.x > user_max.x || user_min.y > user_max.y ||
      user_min.z > user_max.z)
    throw std::invalid_argument("user bounds inverted");
  if (norm(pd_orientation) == 0.0)
    throw std::invalid_argument("pd orientation must be nonzero");
  device.validate();
  harvesting.validate();
  power.validate();
  if (!(noise_variance_w > 0.0))
    throw std::invalid_argument("noise variance must be positive");
  if (!(thresholds.qos >= 0.0))
    throw std::invalid_argument("qos threshold must be nonnegative");
  if (!(thresholds.p_max_w > 0.0))
    throw std::invalid_argument("p_max must be positive");
  if (!(thresholds.p_har_min_w >= 0.0))
    throw std::invalid_argument("p_har_min must be nonnegative");
  dimming.validate();
  if (dimming.n_leds != static_cast<int>(leds.size()))
    throw std::invalid_argument("dimming n_leds disagrees with the LED list");
  if (episode_length < 1)
    throw std::invalid_argument("episode_length must be >= 1");
  if (!(split_max > 0.0)) throw std::invalid_argument("split_max must be positive");
  if (!(penalty_weight >= 0.0))
    throw std::invalid_argument("penalty_weight must be nonnegative");
  if (!(constraint_rel_tol >= 0.0) || !(dimming_rel_tol >= 0.0))
    throw std::invalid_argument("tolerances must be nonnegative");
}

Scenario default_scenario() {
  Scenario sc;
  sc.room = {8.0, 8.0, 3.0};
  // 3x2 ceiling grid: 2 m between x-neighbours (same y), 4 m between
  // y-neighbours (same x), centred in the room.
  for (double y : {2.0, 6.0})
    for (double x : {2.0, 4.0, 6.0})
      sc.leds.push_back(Luminaire{{x, y, 3.0}, {0.0, 0.0, -1.0}});
  sc.user_count = 4;
  sc.user_min = {0.0, 0.0, 0.0};
  sc.user_max = {8.0, 8.0, 1.0};
  sc.device = DeviceConstants{60.0, 60.0, 1e-4, 1.5};
  sc.harvesting = HarvestingConstants{0.75, 25e-3, 1e-9};
  sc.power = PowerConstants{1.2, 1.0};
  sc.noise_variance_w = 1e-14;
  sc.thresholds = Thresholds{3.0, 20.0, 1e-8};
  sc.dimming = DimmingConfig{1.0, 6, 0.0, 10e-3};
  return sc;
}

std::vector<Photodiode> sample_user_positions(const Scenario& scenario,
                                              Rng& rng) {
  std::vector<Photodiode> users(scenario.user_count);
  for (auto& u : users) {
    u.position.x = rng.uniform(scenario.user_min.x, scenario.user_max.x);
    u.position.y = rng.uniform(scenario.user_min.y, scenario.user_max.y);
    u.position.z = rng.uniform(scenario.user_min.z, scenario.user_max.z);
    u.orientation = scenario.pd_orientation;
  }
  return users;
}

ChannelMatrix channel_matrix_for(const Scenario& scenario,
                                 const std::vector<Photodiode>& users) {
  return build_channel_matrix(scenario.leds, users, scenario.device);
}

std::string to_string(Scheme s) {
  return s == Scheme::Rsma ? "rsma" : "noma";
}

std::string to_string(RewardMode m) {
  return m == RewardMode::AsPaper ? "as-paper" : "penalty";
}

std::string to_string(PowerTermMode m) {
  switch (m) {
    case PowerTermMode::AsPrinted: return "as-printed";
    case PowerTermMode::Squared: return "squared";
    default: return "absolute";
  }
}

}  // namespace owc
