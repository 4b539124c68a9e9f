#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "owc/dimming.hpp"

using namespace owc;

namespace {
// Table-I currents: I_l = 0, I_h = 10 mA, I_0 = 5 mA.
DimmingConfig table1(double eta) { return DimmingConfig{eta, 6, 0.0, 10e-3}; }
}  // namespace

TEST_CASE("active LED count") {
  CHECK(active_led_count(table1(0.5)) == 3);
  CHECK(active_led_count(table1(0.66)) == 4);  // round(3.96)
  CHECK(active_led_count(table1(1.0)) == 6);
  // Clamped to at least one.
  CHECK(active_led_count(table1(0.01)) == 1);
}

TEST_CASE("active LED count is nondecreasing in eta") {
  int prev = 0;
  for (int i = 1; i <= 1000; ++i) {
    const int na = active_led_count(table1(i / 1000.0));
    CHECK(na >= prev);
    prev = na;
  }
}

TEST_CASE("dc bias") {
  CHECK(dc_bias(table1(0.5), 3).value == doctest::Approx(5e-3).epsilon(1e-12));
  CHECK(dc_bias(table1(0.66), 4).value ==
        doctest::Approx(4.95e-3).epsilon(1e-12));
  // Full glare lands exactly on I_0.
  CHECK(dc_bias(table1(1.0), 6).value == doctest::Approx(5e-3).epsilon(1e-15));
  CHECK_FALSE(dc_bias(table1(0.5), 3).clamped);
  CHECK_THROWS_AS(dc_bias(table1(0.5), 0), std::invalid_argument);
}

TEST_CASE("dc bias clamps out-of-range values and flags them") {
  // eta*N*(I_0 - I_l)/N_a with N_a forced to 1: 0.9*6*5mA = 27 mA > I_h.
  const BiasResult b = dc_bias(table1(0.9), 1);
  CHECK(b.clamped);
  CHECK(b.value == 10e-3);
}

TEST_CASE("amplitude budget") {
  const DimmingConfig c = table1(0.5);
  CHECK(amplitude_budget(5e-3, c) == doctest::Approx(5e-3));
  CHECK(amplitude_budget(0.0, c) == 0.0);
  CHECK(amplitude_budget(4.95e-3, c) == doctest::Approx(4.95e-3));
  // Maximal at the midpoint.
  CHECK(amplitude_budget(5e-3, c) >= amplitude_budget(3e-3, c));
  CHECK(amplitude_budget(5e-3, c) >= amplitude_budget(7e-3, c));
}

TEST_CASE("dimming constraint verification") {
  CHECK(verify_dimming_constraint(3, 5e-3, table1(0.5)));
  CHECK(verify_dimming_constraint(4, 4.95e-3, table1(0.66)));
  CHECK_FALSE(verify_dimming_constraint(3, 6e-3, table1(0.5)));
}

TEST_CASE("round trip holds across 1000 eta values") {
  for (int i = 1; i <= 1000; ++i) {
    const DimmingConfig c = table1(i / 1000.0);
    const DimmingState st = make_dimming_state(c);
    CHECK(verify_dimming_constraint(st.n_active, st.dc_bias_a, c));
    CHECK(st.amplitude_budget_a >= 0.0);
    CHECK(st.dc_bias_a >= c.current_min_a);
    CHECK(st.dc_bias_a <= c.current_max_a);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS((DimmingConfig{0.0, 6, 0.0, 1e-2}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((DimmingConfig{1.1, 6, 0.0, 1e-2}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((DimmingConfig{0.5, 6, 2e-2, 1e-2}.validate()),
                  std::invalid_argument);
  CHECK_NOTHROW(table1(0.5).validate());
  CHECK(table1(0.5).mid_bias() == doctest::Approx(5e-3));
}
