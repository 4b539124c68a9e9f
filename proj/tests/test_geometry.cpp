#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "owc/geometry.hpp"
#include "owc/rng.hpp"
#include "owc/scenario.hpp"

using namespace owc;

namespace {
DeviceConstants table1() { return DeviceConstants{60.0, 60.0, 1e-4, 1.5}; }
}  // namespace

TEST_CASE("lambertian order") {
  // ln(cos 60) = -ln 2, so m = 1 exactly.
  CHECK(lambertian_order(60.0) == doctest::Approx(1.0).epsilon(1e-12));
  // cos 45 = 2^(-1/2) makes this exactly 2.
  CHECK(lambertian_order(45.0) == doctest::Approx(2.0).epsilon(1e-12));
  // Monotone decreasing toward 0 as the angle approaches 90.
  CHECK(lambertian_order(89.99) < lambertian_order(89.9));
  CHECK(lambertian_order(89.9999) < 1e-1);
  CHECK(lambertian_order(89.9999) > 0.0);

  CHECK_THROWS_AS(lambertian_order(0.0), std::domain_error);
  CHECK_THROWS_AS(lambertian_order(90.0), std::domain_error);
  CHECK_THROWS_AS(lambertian_order(-10.0), std::domain_error);
}

TEST_CASE("concentrator gain") {
  const DeviceConstants c = table1();
  // sin^2(60) = 3/4 -> 2.25 / 0.75 = 3.
  CHECK(concentrator_gain(30.0, c) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(concentrator_gain(0.0, c) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(concentrator_gain(61.0, c) == 0.0);
  CHECK(concentrator_gain(60.0, c) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(concentrator_gain(-1.0, c), std::invalid_argument);
}

TEST_CASE("aligned channel gain matches the scripted oracle") {
  const Luminaire led{{4.0, 4.0, 3.0}, {0.0, 0.0, -1.0}};
  const Photodiode pd{{4.0, 4.0, 0.0}, {0.0, 0.0, 1.0}};
  // Independent evaluation of (m+1) A / (2 pi d^2) * G at psi = phi = 0.
  CHECK(channel_gain(led, pd, table1()) ==
        doctest::Approx(1.0610329539459692e-05).epsilon(1e-12));
}

TEST_CASE("gain is zero outside the FOV") {
  const Luminaire led{{4.0, 4.0, 3.0}, {0.0, 0.0, -1.0}};
  // Incidence angle ~80 degrees at large lateral displacement.
  const Photodiode pd{{4.0 + 3.0 * std::tan(deg_to_rad(80.0)), 4.0, 0.0},
                      {0.0, 0.0, 1.0}};
  CHECK(channel_gain(led, pd, table1()) == 0.0);

  // A PD behind the LED plane never sees light.
  const Photodiode above{{4.0, 4.0, 3.5}, {0.0, 0.0, 1.0}};
  CHECK(channel_gain(led, above, table1()) == 0.0);
}

TEST_CASE("coincident positions are an error") {
  const Luminaire led{{1.0, 1.0, 1.0}, {0.0, 0.0, -1.0}};
  const Photodiode pd{{1.0, 1.0, 1.0}, {0.0, 0.0, 1.0}};
  CHECK_THROWS_AS(channel_gain(led, pd, table1()), std::invalid_argument);
}

TEST_CASE("inverse-square law on the boresight") {
  const Luminaire led{{0.0, 0.0, 3.0}, {0.0, 0.0, -1.0}};
  const Photodiode near_pd{{0.0, 0.0, 2.0}, {0.0, 0.0, 1.0}};  // d = 1
  const Photodiode far_pd{{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}};   // d = 2
  const double h1 = channel_gain(led, near_pd, table1());
  const double h2 = channel_gain(led, far_pd, table1());
  CHECK(h1 / h2 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("gain decreases with distance at fixed angles") {
  const DeviceConstants c = table1();
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 0.5; d < 6.0; d += 0.5) {
    const Luminaire led{{0.0, 0.0, d}, {0.0, 0.0, -1.0}};
    const Photodiode pd{{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    const double h = channel_gain(led, pd, c);
    CHECK(h < prev);
    prev = h;
  }
}

TEST_CASE("gain scales linearly with detector area") {
  DeviceConstants c = table1();
  const Luminaire led{{1.0, 2.0, 3.0}, {0.0, 0.0, -1.0}};
  const Photodiode pd{{2.0, 3.0, 0.5}, {0.0, 0.0, 1.0}};
  const double h1 = channel_gain(led, pd, c);
  CHECK(h1 > 0.0);
  c.pd_area_m2 *= 3.5;
  CHECK(channel_gain(led, pd, c) == doctest::Approx(3.5 * h1).epsilon(1e-12));
}

TEST_CASE("channel matrix: aligned 1x1, FOV zero row, column permutation") {
  const DeviceConstants c = table1();
  {
    const auto m = build_channel_matrix({Luminaire{{4, 4, 3}, {0, 0, -1}}},
                                        {Photodiode{{4, 4, 0}, {0, 0, 1}}}, c);
    REQUIRE(m.users == 1);
    REQUIRE(m.leds == 1);
    CHECK(m.at(0, 0) == doctest::Approx(1.0610329539459692e-05).epsilon(1e-12));
  }
  {
    // User laterally displaced beyond every cone: all-zero row.
    std::vector<Luminaire> leds{Luminaire{{0, 0, 3}, {0, 0, -1}},
                                Luminaire{{1, 0, 3}, {0, 0, -1}}};
    const auto m = build_channel_matrix(
        leds, {Photodiode{{40.0, 0.0, 2.9}, {0, 0, 1}}}, c);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.at(0, 1) == 0.0);
  }
  {
    std::vector<Luminaire> leds{Luminaire{{2, 2, 3}, {0, 0, -1}},
                                Luminaire{{6, 6, 3}, {0, 0, -1}}};
    std::vector<Photodiode> users{Photodiode{{3, 3, 0.5}, {0, 0, 1}}};
    const auto m = build_channel_matrix(leds, users, c);
    std::swap(leds[0], leds[1]);
    const auto swapped = build_channel_matrix(leds, users, c);
    CHECK(m.at(0, 0) == swapped.at(0, 1));
    CHECK(m.at(0, 1) == swapped.at(0, 0));
  }
}

TEST_CASE("mirror symmetry preserves the gain multiset") {
  const Scenario sc = default_scenario();
  Rng rng(7);
  auto users = sample_user_positions(sc, rng);
  const auto m = channel_matrix_for(sc, users);

  // Mirror everything across the x = 4 mid-plane.
  Scenario mirrored = sc;
  for (auto& led : mirrored.leds) led.position.x = sc.room.x - led.position.x;
  auto mirrored_users = users;
  for (auto& u : mirrored_users) u.position.x = sc.room.x - u.position.x;
  const auto m2 = channel_matrix_for(mirrored, mirrored_users);

  auto a = m.gains, b = m2.gains;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("gains vanish exactly when the incidence angle leaves the FOV") {
  const Scenario sc = default_scenario();
  const double cos_fov = std::cos(deg_to_rad(sc.device.fov_semi_angle_deg));
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const auto users = sample_user_positions(sc, rng);
    const auto m = channel_matrix_for(sc, users);
    for (std::size_t k = 0; k < m.users; ++k)
      for (std::size_t n = 0; n < m.leds; ++n) {
        CHECK(m.at(k, n) >= 0.0);
        // Vertical orientations: cos(psi) = dz / d.
        const Vec3 diff = sc.leds[n].position - users[k].position;
        const double cos_inc = diff.z / norm(diff);
        if (cos_inc >= cos_fov + 1e-12) CHECK(m.at(k, n) > 0.0);
        if (cos_inc < cos_fov - 1e-12) CHECK(m.at(k, n) == 0.0);
      }
  }
}
