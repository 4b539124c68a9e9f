#include "owc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "owc/text.hpp"

namespace owc {

std::vector<std::vector<Photodiode>> evaluation_placements(
    const Scenario& scenario, int count, std::uint64_t seed) {
  std::vector<std::vector<Photodiode>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(Rng::derive(seed, 0xe7a1u + static_cast<std::uint64_t>(i)));
    out.push_back(sample_user_positions(scenario, rng));
  }
  return out;
}

GreedyEvalResult evaluate_policy(
    const Scenario& scenario, const Actor& actor, const RunningNormalizer& norm,
    const std::vector<std::vector<Photodiode>>& placements) {
  GreedyEvalResult result;
  Environment env(scenario);
  int steps = 0;
  for (const auto& placement : placements) {
    StateVector state = env.reset_with_users(placement);
    bool done = false;
    while (!done) {
      auto step = greedy_step(env, actor, norm, state);
      result.mean_rate += step.metrics.aggregate();
      if (step.metrics.total_power > 0.0)
        result.mean_ee += step.metrics.aggregate() / step.metrics.total_power;
      result.sat_rate += step.verdict.satisfied_count() / 7.0;
      state = std::move(step.state);
      done = step.done;
      ++steps;
    }
  }
  if (steps > 0) {
    result.mean_rate /= steps;
    result.mean_ee /= steps;
    result.sat_rate /= steps;
  }
  return result;
}

namespace {

SweepCellResult run_cell(const FullConfig& config, double value,
                         int replication, std::size_t cell_index,
                         TimingMode timing) {
  SweepCellResult cell;
  cell.sweep_value = value;
  cell.scheme = config.sweep.scheme;
  cell.replication = replication;
  cell.seed = Rng::derive(config.sweep.seed_base, cell_index);

  const auto start = std::chrono::steady_clock::now();
  try {
    Scenario scenario =
        apply_sweep_value(config.scenario, config.sweep.parameter, value);
    scenario.scheme = config.sweep.scheme;
    scenario.seed = cell.seed;
    scenario.validate();

    Environment env(scenario, cell.seed);
    TrainResult trained = train(env, config.ppo, cell.seed);

    const auto placements = evaluation_placements(
        scenario, config.sweep.eval_placements, config.sweep.seed_base);
    cell.eval = evaluate_policy(scenario, trained.actor, trained.normalizer,
                                placements);
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.error = e.what();
  }
  if (timing == TimingMode::Real) {
    cell.wall_time_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  }
  return cell;
}

}  // namespace

std::string sweep_csv_header() {
  return "sweep_value,scheme,replication,seed,mean_rate,mean_ee,sat_rate,"
         "wall_time,config_hash,code_version";
}

std::string sweep_csv(const FullConfig& config,
                      const std::vector<SweepCellResult>& cells) {
  const std::string hash = config_hash(config);
  std::ostringstream out;
  out << "# schema=owcsim.sweep.v1\n";
  out << sweep_csv_header() << "\n";
  for (const auto& c : cells) {
    out << format_double(c.sweep_value) << ',' << to_string(c.scheme) << ','
        << c.replication << ',' << c.seed << ',';
    if (c.failed) {
      out << "nan,nan,nan";
    } else {
      out << format_double(c.eval.mean_rate) << ','
          << format_double(c.eval.mean_ee) << ','
          << format_double(c.eval.sat_rate);
    }
    out << ',' << format_double(c.wall_time_s) << ',' << hash << ','
        << kCodeVersion << "\n";
  }
  return out.str();
}

SweepResult run_sweep(const FullConfig& config, TimingMode timing,
                      int max_threads) {
  config.sweep.validate();
  const auto& values = config.sweep.values;
  const int reps = config.sweep.replications;
  const std::size_t cell_count = values.size() * static_cast<std::size_t>(reps);

  std::vector<SweepCellResult> cells(cell_count);
  unsigned workers = max_threads > 0
                         ? static_cast<unsigned>(max_threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cell_count));

  // Cells are independent; each derives its RNG stream from its index, so
  // scheduling order cannot change any result.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cell_count) return;
      const std::size_t vi = i / static_cast<std::size_t>(reps);
      const int rep = static_cast<int>(i % static_cast<std::size_t>(reps));
      cells[i] = run_cell(config, values[vi], rep, i, timing);
    }
  };
  std::vector<std::thread> threads;
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  SweepResult result;
  result.cells = std::move(cells);
  result.csv = sweep_csv(config, result.cells);
  return result;
}

}  // namespace owc
