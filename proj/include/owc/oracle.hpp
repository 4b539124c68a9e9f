#ifndef OWC_ORACLE_HPP
#define OWC_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "owc/environment.hpp"
#include "owc/rng.hpp"

namespace owc {

// Ground-truth search results for tiny instances.
struct OracleResult {
  ActionVector best_action;
  double best_reward = 0.0;
  // Max aggregate among fully feasible actions; absent when none was seen.
  std::optional<double> best_feasible_aggregate;
  std::uint64_t evaluations = 0;
};

// All C(N, N_a) binary selection vectors, in lexicographic order of the
// chosen index sets.
std::vector<std::vector<int>> enumerate_selections(int n_leds, int n_active);

// Reward and feasibility computed by a re-implementation of the metric
// pipeline, written independently of the environment module so a single
// formula bug cannot validate itself.
struct OracleEvaluation {
  double reward = 0.0;
  double aggregate = 0.0;
  bool feasible = false;
  int satisfied_count = 0;
};

OracleEvaluation oracle_evaluate(const Scenario& scenario,
                                 const DimmingState& dimming,
                                 const ChannelMatrix& channels,
                                 const ActionVector& action);

struct GridSpec {
  int beam_points = 11;   // grid points per beam dimension, over [-Xi, Xi]
  int split_points = 9;   // grid points per split entry, over [0, split_max]
  std::uint64_t max_evaluations = 10'000'000;
};

// Exhaustive search over {LED selections} x {per-LED beam grids projected
// onto the amplitude budget} x {split grid plus the exact completion that
// spends the whole decodable common rate}. Inactive LEDs keep zero
// weights; their entries never affect any metric.
// Throws std::runtime_error when the grid exceeds max_evaluations.
OracleResult grid_search(const Scenario& scenario, const DimmingState& dimming,
                         const ChannelMatrix& channels, const GridSpec& spec);

// Uniform sampling of projected actions; keeps the incumbent.
OracleResult random_search(const Scenario& scenario,
                           const DimmingState& dimming,
                           const ChannelMatrix& channels, std::uint64_t budget,
                           Rng& rng);

}  // namespace owc

#endif
