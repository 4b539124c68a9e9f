#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "owc/sweep.hpp"
#include "testutil.hpp"

using namespace owc;

namespace {

FullConfig tiny_sweep_config() {
  FullConfig c = default_config();
  c.scenario = testutil::tiny_scenario(1);
  c.scenario.episode_length = 8;
  c.ppo.steps = 8;
  c.ppo.episodes = 6;
  c.ppo.minibatch = 8;
  c.ppo.hidden = 16;
  c.sweep.parameter = SweepSpec::Parameter::Dimming;
  c.sweep.values = {0.5, 1.0};
  c.sweep.replications = 1;
  c.sweep.seed_base = 11;
  c.sweep.eval_placements = 5;
  return c;
}

}  // namespace

TEST_CASE("evaluation placements are shared and seeded") {
  const Scenario sc = testutil::tiny_scenario(2);
  const auto a = evaluation_placements(sc, 10, 99);
  const auto b = evaluation_placements(sc, 10, 99);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(a[i][k].position.x == b[i][k].position.x);
      CHECK(a[i][k].position.y == b[i][k].position.y);
      CHECK(a[i][k].position.z == b[i][k].position.z);
      CHECK(a[i][k].position.x >= sc.user_min.x);
      CHECK(a[i][k].position.x <= sc.user_max.x);
    }
  }
  // A different seed moves the placements.
  const auto c = evaluation_placements(sc, 10, 100);
  CHECK(a[0][0].position.x != c[0][0].position.x);

  // Same placement index shares coordinates across different user counts.
  const Scenario sc3 = testutil::tiny_scenario(3);
  const auto d = evaluation_placements(sc3, 10, 99);
  CHECK(d[0][0].position.x == a[0][0].position.x);
  CHECK(d[0][1].position.y == a[0][1].position.y);
}

TEST_CASE("sweep: row accounting and cell fields") {
  const FullConfig c = tiny_sweep_config();
  const SweepResult result = run_sweep(c, TimingMode::None, 2);
  REQUIRE(result.cells.size() == 2);
  CHECK(result.cells[0].sweep_value == 0.5);
  CHECK(result.cells[1].sweep_value == 1.0);
  for (const auto& cell : result.cells) {
    CHECK_FALSE(cell.failed);
    CHECK(cell.eval.mean_rate >= 0.0);
    CHECK(cell.eval.sat_rate >= 0.0);
    CHECK(cell.eval.sat_rate <= 1.0);
    CHECK(cell.wall_time_s == 0.0);  // timing disabled
  }
  // Header plus two data rows plus the schema comment.
  CHECK(result.csv.find("# schema=owcsim.sweep.v1\n") == 0);
  CHECK(result.csv.find(sweep_csv_header()) != std::string::npos);
}

TEST_CASE("sweep output is byte-deterministic and thread-count independent") {
  const FullConfig c = tiny_sweep_config();
  const SweepResult a = run_sweep(c, TimingMode::None, 1);
  const SweepResult b = run_sweep(c, TimingMode::None, 2);
  CHECK(a.csv == b.csv);
}

TEST_CASE("replications get distinct seeds") {
  FullConfig c = tiny_sweep_config();
  c.sweep.values = {1.0};
  c.sweep.replications = 2;
  const SweepResult result = run_sweep(c, TimingMode::None, 2);
  REQUIRE(result.cells.size() == 2);
  CHECK(result.cells[0].seed != result.cells[1].seed);
  CHECK(result.cells[0].replication == 0);
  CHECK(result.cells[1].replication == 1);
}

TEST_CASE("a failing cell is recorded and the sweep continues") {
  FullConfig c = tiny_sweep_config();
  c.sweep.parameter = SweepSpec::Parameter::Users;
  // user_count = 0 fails scenario validation inside the cell.
  c.sweep.values = {0.0, 1.0};
  // Bypass SweepSpec validation to exercise the per-cell failure path.
  c.sweep.values[0] = 1.0;
  SweepResult ok = run_sweep(c, TimingMode::None, 2);
  CHECK_FALSE(ok.cells[0].failed);

  // Force a genuine cell failure: noise variance becomes invalid.
  FullConfig broken = tiny_sweep_config();
  broken.scenario.noise_variance_w = 0.0;
  const SweepResult result = run_sweep(broken, TimingMode::None, 2);
  REQUIRE(result.cells.size() == 2);
  for (const auto& cell : result.cells) {
    CHECK(cell.failed);
    CHECK_FALSE(cell.error.empty());
  }
  CHECK(result.csv.find("nan,nan,nan") != std::string::npos);
}

TEST_CASE("greedy evaluation is deterministic given a trained policy") {
  FullConfig c = tiny_sweep_config();
  Environment env(c.scenario, 21);
  TrainResult tr = train(env, c.ppo, 21);
  const auto placements = evaluation_placements(c.scenario, 5, 3);
  const auto e1 = evaluate_policy(c.scenario, tr.actor, tr.normalizer, placements);
  const auto e2 = evaluate_policy(c.scenario, tr.actor, tr.normalizer, placements);
  CHECK(e1.mean_rate == e2.mean_rate);
  CHECK(e1.mean_ee == e2.mean_ee);
  CHECK(e1.sat_rate == e2.sat_rate);
}
