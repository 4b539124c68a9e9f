// owcsim: simulator and PPO optimizer for a multi-LED SLIPT downlink with
// joint dimming and rate-splitting multiple access.
//
// Exit codes: 0 success, 1 invalid config, 2 runtime failure,
// 3 validation-check failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "owc/config.hpp"
#include "owc/environment.hpp"
#include "owc/oracle.hpp"
#include "owc/ppo.hpp"
#include "owc/sweep.hpp"
#include "owc/text.hpp"

namespace {

using namespace owc;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<double> eta;
  std::optional<int> episodes;
};

FullConfig load_with_overrides(const Options& opt) {
  FullConfig config =
      opt.config_path.empty() ? default_config() : load_config_file(opt.config_path);
  if (opt.seed) config.scenario.seed = *opt.seed;
  if (opt.scheme) {
    const Scheme s = *opt.scheme == "noma" ? Scheme::Noma : Scheme::Rsma;
    config.scenario.scheme = s;
    config.sweep.scheme = s;
  }
  if (opt.eta) config.scenario.dimming.target_level = *opt.eta;
  if (opt.episodes) config.ppo.episodes = *opt.episodes;
  return config;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::string out_path(const Options& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  return (std::filesystem::path(opt.out_dir) / name).string();
}

std::string action_file(const ActionVector& a, Scheme scheme) {
  std::ostringstream out;
  out << "owcsim-action v1\n";
  out << "scheme " << to_string(scheme) << "\n";
  out << "leds " << a.selection.size() << "\n";
  out << "users " << a.split.allocations.size() << "\n";
  out << "selection";
  for (int s : a.selection) out << ' ' << s;
  out << "\ncommon";
  for (double w : a.beams.common) out << ' ' << format_double(w);
  out << "\n";
  for (std::size_t k = 0; k < a.beams.users; ++k) {
    out << "private_" << k;
    for (std::size_t n = 0; n < a.beams.leds; ++n)
      out << ' ' << format_double(a.beams.private_at(k, n));
    out << "\n";
  }
  out << "split";
  for (double r : a.split.allocations) out << ' ' << format_double(r);
  out << "\n";
  return out.str();
}

std::string training_log_csv(const FullConfig& config,
                             const std::vector<EpisodeLog>& log) {
  std::ostringstream out;
  out << "# schema=owcsim.training.v1\n";
  out << "episode,mean_reward,mean_surrogate,mean_critic_loss,sat_rate,"
         "config_hash,seed,code_version\n";
  const std::string hash = config_hash(config);
  for (const auto& row : log)
    out << row.episode << ',' << format_double(row.mean_reward) << ','
        << format_double(row.mean_surrogate) << ','
        << format_double(row.mean_critic_loss) << ','
        << format_double(row.sat_rate) << ',' << hash << ','
        << config.scenario.seed << ',' << kCodeVersion << "\n";
  return out.str();
}

int cmd_example_scenario(const Options& opt, const std::string& file) {
  FullConfig config = load_with_overrides(opt);
  const std::string text = emit_config(config);
  if (file.empty())
    std::cout << text;
  else
    write_file(file, text);
  return 0;
}

// Cheap internal consistency checks on the configured instance; these are
// the `validate` command's acceptance gates (exit 3 on failure).
int cmd_validate(const Options& opt) {
  FullConfig config = load_with_overrides(opt);
  config.scenario.validate();
  config.ppo.validate();
  config.sweep.validate();

  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  };

  // Dimming identity across the eta grid.
  {
    bool ok = true;
    DimmingConfig dim = config.scenario.dimming;
    for (int i = 1; i <= 1000; ++i) {
      dim.target_level = i / 1000.0;
      const DimmingState st = make_dimming_state(dim);
      if (!verify_dimming_constraint(st.n_active, st.dc_bias_a, dim,
                                     config.scenario.dimming_rel_tol) ||
          st.amplitude_budget_a < 0.0)
        ok = false;
    }
    check(ok, "dimming round-trip over 1000 eta values");
  }

  // Channel gains nonnegative and zero outside the FOV.
  {
    Rng rng(config.scenario.seed);
    Environment env(config.scenario, config.scenario.seed);
    bool ok = true;
    for (int i = 0; i < 16; ++i) {
      env.reset();
      for (double g : env.channels().gains)
        if (!(g >= 0.0) || !std::isfinite(g)) ok = false;
    }
    check(ok, "channel gains finite and nonnegative on sampled placements");
  }

  // Projection honors C5/C7; environment and oracle evaluators agree.
  {
    Environment env(config.scenario, config.scenario.seed);
    env.reset();
    Rng rng(Rng::derive(config.scenario.seed, 77));
    bool project_ok = true;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      std::vector<double> raw(env.raw_dim());
      for (auto& x : raw) x = rng.normal(0.0, 2.0);
      const ActionVector action = env.project(raw);
      const Evaluation ev =
          evaluate(env.scenario(), env.dimming_state(), env.channels(), action);
      if (!ev.verdict.satisfied[4] || !ev.verdict.satisfied[6])
        project_ok = false;
      const double r = reward(ev.metrics, ev.verdict,
                              config.scenario.reward_mode,
                              config.scenario.penalty_weight);
      const OracleEvaluation oe = oracle_evaluate(
          env.scenario(), env.dimming_state(), env.channels(), action);
      const double denom = std::max({1e-30, std::abs(r), std::abs(oe.reward)});
      worst = std::max(worst, std::abs(r - oe.reward) / denom);
    }
    check(project_ok, "projected actions satisfy C5 and C7");
    check(worst <= 1e-12, "dual evaluators agree on 100 random actions");
  }

  if (failures > 0) {
    std::cerr << failures << " validation check(s) failed\n";
    return 3;
  }
  std::cout << "config " << config_hash(config) << " valid\n";
  return 0;
}

int cmd_oracle(const Options& opt, bool random, std::uint64_t budget_override) {
  FullConfig config = load_with_overrides(opt);
  config.scenario.validate();

  Environment env(config.scenario, config.scenario.seed);
  env.reset();

  OracleResult result;
  if (random) {
    Rng rng(Rng::derive(config.scenario.seed, 0x0bacc1e5));
    const std::uint64_t budget =
        budget_override > 0 ? budget_override : config.oracle.random_budget;
    result = random_search(env.scenario(), env.dimming_state(), env.channels(),
                           budget, rng);
  } else {
    result = grid_search(env.scenario(), env.dimming_state(), env.channels(),
                         config.oracle.grid);
  }

  std::ostringstream csv;
  csv << "# schema=owcsim.oracle.v1\n";
  csv << "method,scheme,seed,evaluations,best_reward,best_feasible_aggregate,"
         "config_hash,code_version\n";
  csv << (random ? "random" : "grid") << ',' << to_string(config.scenario.scheme)
      << ',' << config.scenario.seed << ',' << result.evaluations << ','
      << format_double(result.best_reward) << ','
      << (result.best_feasible_aggregate
              ? format_double(*result.best_feasible_aggregate)
              : "none")
      << ',' << config_hash(config) << ',' << kCodeVersion << "\n";

  write_file(out_path(opt, "oracle.csv"), csv.str());
  write_file(out_path(opt, "best_action.txt"),
             action_file(result.best_action, config.scenario.scheme));
  std::cout << csv.str();
  return 0;
}

int cmd_train(const Options& opt) {
  FullConfig config = load_with_overrides(opt);
  config.scenario.validate();
  config.ppo.validate();

  Environment env(config.scenario, config.scenario.seed);
  TrainResult result = train(env, config.ppo, config.scenario.seed);

  write_file(out_path(opt, "training_log.csv"),
             training_log_csv(config, result.log));

  Checkpoint ck{config.scenario.scheme,
                static_cast<std::size_t>(config.scenario.user_count),
                config.scenario.led_count(),
                env.n_active(),
                config.ppo,
                std::move(result.actor),
                std::move(result.critic),
                std::move(result.normalizer)};
  std::ostringstream ck_text;
  save_checkpoint(ck_text, ck);
  write_file(out_path(opt, "checkpoint.txt"), ck_text.str());

  const auto& last = result.log.back();
  std::cout << "trained " << config.ppo.episodes << " episodes; final mean reward "
            << format_double(last.mean_reward) << ", sat rate "
            << format_double(last.sat_rate) << "\n";
  return 0;
}

int cmd_eval(const Options& opt, const std::string& checkpoint_path) {
  FullConfig config = load_with_overrides(opt);
  config.scenario.validate();

  std::ifstream in(checkpoint_path);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + checkpoint_path + "'");
  Checkpoint ck = load_checkpoint(in);
  if (ck.users != static_cast<std::size_t>(config.scenario.user_count) ||
      ck.leds != config.scenario.led_count())
    throw std::runtime_error("checkpoint dimensions do not match the config");
  config.scenario.scheme = ck.scheme;

  const auto placements = evaluation_placements(
      config.scenario, config.sweep.eval_placements, config.sweep.seed_base);
  const GreedyEvalResult eval =
      evaluate_policy(config.scenario, ck.actor, ck.normalizer, placements);

  std::ostringstream csv;
  csv << "# schema=owcsim.eval.v1\n";
  csv << "scheme,placements,mean_rate,mean_ee,sat_rate,config_hash,code_version\n";
  csv << to_string(ck.scheme) << ',' << placements.size() << ','
      << format_double(eval.mean_rate) << ',' << format_double(eval.mean_ee)
      << ',' << format_double(eval.sat_rate) << ',' << config_hash(config)
      << ',' << kCodeVersion << "\n";
  write_file(out_path(opt, "eval.csv"), csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_sweep(const Options& opt, const std::string& timing, int threads) {
  FullConfig config = load_with_overrides(opt);
  config.scenario.validate();
  config.ppo.validate();
  config.sweep.validate();

  const TimingMode mode =
      timing == "real" ? TimingMode::Real : TimingMode::None;
  SweepResult result = run_sweep(config, mode, threads);
  write_file(out_path(opt, "sweep.csv"), result.csv);

  int failed = 0;
  for (const auto& c : result.cells)
    if (c.failed) {
      ++failed;
      std::cerr << "cell value=" << c.sweep_value << " rep=" << c.replication
                << " failed: " << c.error << "\n";
    }
  std::cout << result.csv;
  if (failed > 0) std::cerr << failed << " cell(s) failed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-LED SLIPT/RSMA downlink simulator and PPO optimizer"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  Options opt;
  app.add_option("--config", opt.config_path, "config file path")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "override the scenario seed");
  app.add_option("--scheme", opt.scheme, "rsma or noma")
      ->check(CLI::IsMember({"rsma", "noma"}));
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--eta", opt.eta, "override the dimming target level");
  app.add_option("--episodes", opt.episodes, "override PPO episode count");

  auto* example = app.add_subcommand("example-scenario", "emit the default config");
  std::string example_file;
  example->add_option("--file", example_file, "write to a file instead of stdout");

  auto* validate = app.add_subcommand("validate", "run invariant checks on a config");

  auto* oracle = app.add_subcommand("oracle", "brute-force search on a tiny instance");
  bool oracle_random = false;
  std::uint64_t oracle_budget = 0;
  oracle->add_flag("--random", oracle_random, "random search instead of grid");
  oracle->add_option("--budget", oracle_budget, "random-search budget override");

  auto* train_cmd = app.add_subcommand("train", "single PPO training run");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  std::string checkpoint_path;
  eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* sweep_cmd = app.add_subcommand("sweep", "train/evaluate across swept values");
  std::string timing = "none";
  int threads = 0;
  sweep_cmd->add_option("--timing", timing, "wall-time column: none (default) or real")
      ->check(CLI::IsMember({"none", "real"}));
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (example->parsed()) return cmd_example_scenario(opt, example_file);
    if (validate->parsed()) return cmd_validate(opt);
    if (oracle->parsed()) return cmd_oracle(opt, oracle_random, oracle_budget);
    if (train_cmd->parsed()) return cmd_train(opt);
    if (eval_cmd->parsed()) return cmd_eval(opt, checkpoint_path);
    if (sweep_cmd->parsed()) return cmd_sweep(opt, timing, threads);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
