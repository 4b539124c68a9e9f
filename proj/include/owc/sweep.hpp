#ifndef OWC_SWEEP_HPP
#define OWC_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "owc/config.hpp"
#include "owc/ppo.hpp"

namespace owc {

// Seeded user placements shared across all sweep cells so comparisons are
// paired. Placement i depends only on (seed, i), not on user_count, so a
// users-sweep keeps shared coordinate prefixes.
std::vector<std::vector<Photodiode>> evaluation_placements(
    const Scenario& scenario, int count, std::uint64_t seed);

struct GreedyEvalResult {
  double mean_rate = 0.0;
  double mean_ee = 0.0;
  double sat_rate = 0.0;
};

// Greedy-policy metrics averaged over an evaluation set.
GreedyEvalResult evaluate_policy(const Scenario& scenario, const Actor& actor,
                                 const RunningNormalizer& norm,
                                 const std::vector<std::vector<Photodiode>>&
                                     placements);

enum class TimingMode { None, Real };

struct SweepCellResult {
  double sweep_value = 0.0;
  Scheme scheme = Scheme::Rsma;
  int replication = 0;
  std::uint64_t seed = 0;
  GreedyEvalResult eval;
  double wall_time_s = 0.0;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepCellResult> cells;
  std::string csv;
};

// Trains one cell per (value, replication) and evaluates the greedy policy
// on the shared placement set. Cells run on a small thread pool; each owns
// an RNG stream derived from (seed_base, cell index), so the result is
// independent of scheduling. Training failures mark the row and the sweep
// continues. TimingMode::None zeroes wall_time to keep the CSV
// byte-deterministic.
SweepResult run_sweep(const FullConfig& config, TimingMode timing,
                      int max_threads = 0);

std::string sweep_csv_header();
std::string sweep_csv(const FullConfig& config,
                      const std::vector<SweepCellResult>& cells);

}  // namespace owc

#endif
