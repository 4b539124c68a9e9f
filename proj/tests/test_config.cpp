#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "owc/config.hpp"

using namespace owc;

TEST_CASE("emit/parse round trip is exact") {
  FullConfig c = default_config();
  const std::string text = emit_config(c);
  const FullConfig back = parse_config(text);
  CHECK(emit_config(back) == text);
  CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("round trip survives awkward values") {
  FullConfig c = default_config();
  c.scenario.noise_variance_w = 3.141592653589793e-17;
  c.scenario.seed = 18446744073709551615ULL;  // max u64
  c.scenario.dimming.target_level = 0.6600000000000001;
  c.scenario.split_max = 7.999999999999999;
  c.ppo.actor_lr = 2.9999999999999997e-4;
  c.sweep.values = {1e-9, 1e-8, 1e-7, 1e-6, 1e-5};
  c.sweep.parameter = SweepSpec::Parameter::EhMin;
  c.scenario.scheme = Scheme::Noma;
  c.scenario.reward_mode = RewardMode::Penalty;
  c.scenario.power_term_mode = PowerTermMode::Squared;
  const std::string text = emit_config(c);
  const FullConfig back = parse_config(text);
  CHECK(emit_config(back) == text);
  CHECK(back.scenario.noise_variance_w == c.scenario.noise_variance_w);
  CHECK(back.scenario.seed == c.scenario.seed);
  CHECK(back.ppo.actor_lr == c.ppo.actor_lr);
  CHECK(back.scenario.scheme == Scheme::Noma);
  CHECK(back.scenario.reward_mode == RewardMode::Penalty);
  CHECK(back.scenario.power_term_mode == PowerTermMode::Squared);
  CHECK(back.sweep.values == c.sweep.values);
}

TEST_CASE("comments and blank lines are ignored") {
  const std::string text =
      "# leading comment\n"
      "[env]\n"
      "seed = 42   # trailing comment\n"
      "\n"
      "[thresholds]\n"
      "qos = 2.5\n";
  const FullConfig c = parse_config(text);
  CHECK(c.scenario.seed == 42);
  CHECK(c.scenario.thresholds.qos == 2.5);
  // Untouched keys keep their defaults.
  CHECK(c.scenario.thresholds.p_max_w == 20.0);
}

TEST_CASE("unknown sections and keys are rejected") {
  CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env]\nbogus_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env]\nseed = 1\nseed = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("seed = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env]\nseed\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env\nseed = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env]\nscheme = wat\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[users]\nmin = 1 2\n"), ConfigError);
}

TEST_CASE("ppo steps follow the episode length") {
  const FullConfig c = parse_config("[env]\nepisode_length = 17\n");
  CHECK(c.scenario.episode_length == 17);
  CHECK(c.ppo.steps == 17);
}

TEST_CASE("led count resizes the list and the dimming config") {
  FullConfig c = parse_config(
      "[leds]\ncount = 2\npos_0 = 1 1 3\npos_1 = 3 3 3\n");
  CHECK(c.scenario.leds.size() == 2);
  CHECK(c.scenario.dimming.n_leds == 2);
  CHECK(c.scenario.leds[1].position.y == 3.0);
  // Orientation defaults straight down.
  CHECK(c.scenario.leds[0].orientation.z == -1.0);
}

TEST_CASE("config hash is stable and sensitive") {
  FullConfig a = default_config();
  FullConfig b = default_config();
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.scenario.seed += 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("sweep value application") {
  const Scenario base = default_scenario();
  CHECK(apply_sweep_value(base, SweepSpec::Parameter::Dimming, 0.3)
            .dimming.target_level == 0.3);
  CHECK(apply_sweep_value(base, SweepSpec::Parameter::Qos, 1.25)
            .thresholds.qos == 1.25);
  CHECK(apply_sweep_value(base, SweepSpec::Parameter::EhMin, 1e-6)
            .thresholds.p_har_min_w == 1e-6);
  CHECK(apply_sweep_value(base, SweepSpec::Parameter::Users, 3.0).user_count ==
        3);
}

TEST_CASE("sweep spec validation") {
  SweepSpec s;
  s.values = {};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.values = {0.5};
  s.replications = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.replications = 1;
  CHECK_NOTHROW(s.validate());
  s.parameter = SweepSpec::Parameter::Dimming;
  s.values = {0.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.parameter = SweepSpec::Parameter::Users;
  s.values = {2.5};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.values = {2.0, 4.0};
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("scenario validation catches broken configs") {
  Scenario s = default_scenario();
  CHECK_NOTHROW(s.validate());
  s.leds[0].position.z = 9.0;  // outside the room
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  s = default_scenario();
  s.user_max.z = 99.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  s = default_scenario();
  s.dimming.n_leds = 5;  // disagrees with the LED list
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  s = default_scenario();
  s.noise_variance_w = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
