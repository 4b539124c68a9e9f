#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "owc/rng.hpp"
#include "owc/slipt.hpp"

using namespace owc;

namespace {
HarvestingConstants table1_eh() { return HarvestingConstants{0.75, 25e-3, 1e-9}; }
PowerConstants table1_power() { return PowerConstants{1.2, 1.0}; }
}  // namespace

TEST_CASE("harvested power, single active LED") {
  ChannelMatrix ch(1, 1);
  ch.at(0, 0) = 1.0610329539459692e-05;
  // tau V_t h i_DC * ln(1 + h i_DC / I_s); scripted oracle value.
  CHECK(harvested_power(0, ch, {1}, 5e-3, table1_eh()) ==
        doctest::Approx(3.968866738407918e-09).epsilon(1e-12));
  CHECK(harvested_power(0, ch, {1}, 0.0, table1_eh()) == 0.0);
  CHECK(harvested_power(0, ch, {0}, 5e-3, table1_eh()) == 0.0);
  CHECK_THROWS_AS(harvested_power(0, ch, {1}, -1e-3, table1_eh()),
                  std::invalid_argument);
}

TEST_CASE("log argument sums all LEDs as printed, active only behind the flag") {
  ChannelMatrix ch(1, 2);
  ch.at(0, 0) = 1e-5;
  ch.at(0, 1) = 2e-5;
  const std::vector<int> sel{1, 0};
  const double as_printed = harvested_power(0, ch, sel, 5e-3, table1_eh(), false);
  const double active_only = harvested_power(0, ch, sel, 5e-3, table1_eh(), true);
  // The inactive LED still feeds the log term in the printed form.
  CHECK(as_printed > active_only);
  const double pref = 0.75 * 25e-3 * 1e-5 * 5e-3;
  CHECK(as_printed ==
        doctest::Approx(pref * std::log(1.0 + 3e-5 * 5e-3 / 1e-9)).epsilon(1e-12));
  CHECK(active_only ==
        doctest::Approx(pref * std::log(1.0 + 1e-5 * 5e-3 / 1e-9)).epsilon(1e-12));
}

TEST_CASE("harvested power is nondecreasing in bias and channel gain") {
  ChannelMatrix ch(1, 2);
  ch.at(0, 0) = 1e-5;
  ch.at(0, 1) = 3e-5;
  const std::vector<int> sel{1, 1};
  double prev = -1.0;
  for (double bias = 0.0; bias <= 10e-3; bias += 1e-3) {
    const double p = harvested_power(0, ch, sel, bias, table1_eh());
    CHECK(p >= prev);
    prev = p;
  }
  const double base = harvested_power(0, ch, sel, 5e-3, table1_eh());
  ch.at(0, 0) *= 2.0;
  CHECK(harvested_power(0, ch, sel, 5e-3, table1_eh()) >= base);
}

TEST_CASE("total power, worked example") {
  Beamformers b(1, 1);
  b.common[0] = 1e-3;
  b.private_at(0, 0) = 2e-3;
  const std::vector<double> harvested{3.968866738407918e-09};
  // 1.2 * 3 mA + 1 * 5 mA - P_har; current-to-power via phi = 1 W/A.
  CHECK(total_power(b, {1}, 5e-3, 1, harvested, table1_power()) ==
        doctest::Approx(0.008599996031133261).epsilon(1e-12));

  Beamformers zero(1, 1);
  CHECK(total_power(zero, {1}, 0.0, 1, {0.0}, table1_power()) == 0.0);
}

TEST_CASE("harvest offsets total power one-for-one") {
  Beamformers b(1, 1);
  b.common[0] = 1e-3;
  const double p0 = total_power(b, {1}, 5e-3, 1, {0.0}, table1_power());
  const double p1 = total_power(b, {1}, 5e-3, 1, {1e-6}, table1_power());
  CHECK(p0 - p1 == doctest::Approx(1e-6).epsilon(1e-9));
}

TEST_CASE("power term modes") {
  Beamformers b(1, 1);
  b.common[0] = -2e-3;
  b.private_at(0, 0) = 1e-3;
  const std::vector<double> none{0.0};
  const double printed = total_power(b, {1}, 0.0, 1, none, table1_power(),
                                     PowerTermMode::AsPrinted);
  const double absolute = total_power(b, {1}, 0.0, 1, none, table1_power(),
                                      PowerTermMode::Absolute);
  const double squared = total_power(b, {1}, 0.0, 1, none, table1_power(),
                                     PowerTermMode::Squared);
  CHECK(printed == doctest::Approx(1.2 * -1e-3));  // sign flip pays off
  CHECK(absolute == doctest::Approx(1.2 * 3e-3));
  CHECK(squared == doctest::Approx(1.2 * 1e-6));
}

TEST_CASE("total power ignores inactive LEDs and grows with active weights") {
  Beamformers b(1, 2);
  b.common = {1e-3, 1e-3};
  b.private_at(0, 0) = 1e-3;
  b.private_at(0, 1) = 1e-3;
  const std::vector<int> sel{1, 0};
  const std::vector<double> none{0.0};
  const double p0 = total_power(b, sel, 5e-3, 1, none, table1_power());
  b.common[1] = 123.0;  // inactive
  CHECK(total_power(b, sel, 5e-3, 1, none, table1_power()) == p0);
  b.common[0] *= 2.0;  // active
  CHECK(total_power(b, sel, 5e-3, 1, none, table1_power()) > p0);
}

TEST_CASE("energy efficiency") {
  CHECK(energy_efficiency(6.5, 0.0086) ==
        doctest::Approx(755.8139534883721).epsilon(1e-12));
  CHECK(energy_efficiency(0.0, 1.0) == 0.0);
  CHECK(energy_efficiency(13.0, 0.0172) ==
        doctest::Approx(energy_efficiency(6.5, 0.0086)).epsilon(1e-12));
  CHECK_THROWS_AS(energy_efficiency(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(energy_efficiency(1.0, -0.5), std::domain_error);
}

TEST_CASE("harvest never exceeds consumption on desk-scale instances") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    ChannelMatrix ch(2, 3);
    for (auto& g : ch.gains) g = rng.uniform(0.0, 3e-5);
    const double bias = rng.uniform(1e-3, 10e-3);
    const std::vector<int> sel{1, rng.uniform_int(2), rng.uniform_int(2)};
    const int n_active = sel[0] + sel[1] + sel[2];
    Beamformers b(2, 3);
    for (auto& w : b.common) w = rng.uniform(-5e-3, 5e-3);
    for (auto& w : b.private_) w = rng.uniform(-5e-3, 5e-3);

    double harvest_sum = 0.0;
    std::vector<double> harvested(2);
    for (std::size_t k = 0; k < 2; ++k) {
      harvested[k] = harvested_power(k, ch, sel, bias, table1_eh());
      harvest_sum += harvested[k];
    }
    const double consumed =
        total_power(b, sel, bias, n_active, std::vector<double>(2, 0.0),
                    table1_power());
    CHECK(harvest_sum < consumed);
    CHECK(total_power(b, sel, bias, n_active, harvested, table1_power()) > 0.0);
  }
}

TEST_CASE("constants validate") {
  CHECK_NOTHROW(table1_eh().validate());
  CHECK_NOTHROW(table1_power().validate());
  CHECK_THROWS_AS((HarvestingConstants{0.0, 25e-3, 1e-9}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((HarvestingConstants{0.75, 0.0, 1e-9}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((PowerConstants{0.9, 1.0}.validate()), std::invalid_argument);
}
