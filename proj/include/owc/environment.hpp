#ifndef OWC_ENVIRONMENT_HPP
#define OWC_ENVIRONMENT_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "owc/rates.hpp"
#include "owc/scenario.hpp"

namespace owc {

// One decision of the agent: beamformers, binary LED selection, rate split.
struct ActionVector {
  Beamformers beams;
  std::vector<int> selection;  // N entries in {0,1}
  RateSplit split;
};

struct SystemMetrics {
  RateReport rates;
  std::vector<double> harvested;
  double total_power = 0.0;

  double aggregate() const { return rates.aggregate; }
};

// P1 constraint verdicts C1..C7 with signed slacks.
struct ConstraintVerdict {
  std::array<bool, 7> satisfied{};
  std::array<double, 7> margins{};

  int satisfied_count() const;
  bool all_satisfied() const;
};

struct Evaluation {
  SystemMetrics metrics;
  ConstraintVerdict verdict;
};

using StateVector = std::vector<double>;

// Continuous coordinates of the raw action:
// [w^c (N) | w^p rows (K*N) | split (K)], followed by N selection logits.
std::size_t raw_continuous_dim(std::size_t users, std::size_t leds);
std::size_t raw_action_dim(std::size_t users, std::size_t leds);

// Indices sorted by descending value, ties by lowest index.
std::vector<int> descending_order(std::span<const double> values);

// Builds the feasible action from continuous coordinates and a chosen LED
// set: per-LED weights are uniformly downscaled onto the amplitude budget
// (C7) and splits pass through split_max * sigmoid (nonnegative, bounded).
// NOMA zeroes the common beam and the split.
ActionVector assemble_action(const Scenario& scenario,
                             std::span<const double> continuous,
                             std::span<const int> selected_leds,
                             double amplitude_budget_a);

// Deterministic projection of an unconstrained raw vector: top-N_a logits
// pick the LEDs (C5), then assemble_action.
ActionVector project_action(const Scenario& scenario,
                            std::span<const double> raw, int n_active,
                            double amplitude_budget_a);

// Evaluates rates, harvested powers, total power and all seven constraint
// verdicts for one action against a fixed channel. Pure.
Evaluation evaluate(const Scenario& scenario, const DimmingState& dimming,
                    const ChannelMatrix& channels, const ActionVector& action);

// r = R^Agg * (1 + #satisfied) in AsPaper mode,
// r = R^Agg - penalty_weight * #violated in Penalty mode.
double reward(const SystemMetrics& metrics, const ConstraintVerdict& verdict,
              RewardMode mode, double penalty_weight);

// The MDP wrapper: fixed user placement per episode, next state reports the
// metrics of the action just taken. Single-owner mutable state.
class Environment {
 public:
  Environment(Scenario scenario, std::uint64_t seed);
  explicit Environment(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const DimmingState& dimming_state() const { return dimming_; }
  const ChannelMatrix& channels() const { return channels_; }
  const std::vector<Photodiode>& users() const { return users_; }

  std::size_t state_dim() const;
  std::size_t raw_dim() const;
  int n_active() const { return dimming_.n_active; }
  double amplitude_budget() const { return dimming_.amplitude_budget_a; }

  // Resamples user positions and starts a fresh episode in the zero state.
  StateVector reset();

  // Fixes the user placement explicitly (evaluation sets, tests).
  StateVector reset_with_users(std::vector<Photodiode> users);

  struct StepResult {
    StateVector state;
    double reward = 0.0;
    SystemMetrics metrics;
    ConstraintVerdict verdict;
    bool done = false;
  };

  // Throws std::logic_error when stepping a finished episode.
  StepResult step(const ActionVector& action);
  StepResult step_raw(std::span<const double> raw);

  ActionVector project(std::span<const double> raw) const;
  StateVector state_from(const SystemMetrics& metrics,
                         const ActionVector& action) const;

 private:
  Scenario scenario_;
  DimmingState dimming_;
  Rng rng_;
  std::vector<Photodiode> users_;
  ChannelMatrix channels_;
  int step_count_ = 0;
  bool episode_open_ = false;
};

}  // namespace owc

#endif
