#include "owc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace owc {

namespace {

// The whole metric pipeline below is written against the printed formulas
// with plain loops, on purpose not calling the rates/slipt/environment
// functions it cross-checks.

struct Metrics {
  std::vector<double> common_rates;
  std::vector<double> private_rates;
  std::vector<double> harvested;
  double total_power = 0.0;
};

bool holds(double lhs, double rhs, double rel_tol) {
  return lhs - rhs >= -rel_tol * std::max(std::abs(lhs), std::abs(rhs));
}

void compute_metrics(const Scenario& sc, const DimmingState& dim,
                     const ChannelMatrix& ch, const ActionVector& a,
                     Metrics& m) {
  const std::size_t users = ch.users;
  const std::size_t leds = ch.leds;
  const double sigma2 = sc.noise_variance_w;

  m.common_rates.assign(users, 0.0);
  m.private_rates.assign(users, 0.0);
  m.harvested.assign(users, 0.0);

  // Stream gains via sum over active LEDs.
  auto dot = [&](std::size_t user, const double* w) {
    double acc = 0.0;
    for (std::size_t n = 0; n < leds; ++n)
      if (a.selection[n]) acc += ch.at(user, n) * w[n];
    return acc;
  };

  if (sc.scheme == Scheme::Rsma) {
    for (std::size_t k = 0; k < users; ++k) {
      const double c = dot(k, a.beams.common.data());
      double all_private = 0.0;
      double cross = 0.0;
      double own = 0.0;
      for (std::size_t j = 0; j < users; ++j) {
        const double v = dot(k, &a.beams.private_[j * leds]);
        all_private += v * v;
        if (j == k)
          own = v;
        else
          cross += v * v;
      }
      m.common_rates[k] = std::log2(1.0 + c * c / (all_private + sigma2));
      m.private_rates[k] = std::log2(1.0 + own * own / (cross + sigma2));
    }
  } else {
    // NOMA SIC: strongest-first ordering by selected channel energy.
    std::vector<std::size_t> order(users);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> energy(users, 0.0);
    for (std::size_t k = 0; k < users; ++k)
      for (std::size_t n = 0; n < leds; ++n)
        if (a.selection[n]) energy[k] += ch.at(k, n) * ch.at(k, n);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (energy[x] != energy[y]) return energy[x] > energy[y];
      return x < y;
    });
    std::vector<double> g(users * users);
    for (std::size_t i = 0; i < users; ++i)
      for (std::size_t j = 0; j < users; ++j) {
        const double v = dot(order[i], &a.beams.private_[order[j] * leds]);
        g[i * users + j] = v * v;
      }
    for (std::size_t j = 0; j < users; ++j) {
      double rate = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i <= j; ++i) {
        double interf = 0.0;
        for (std::size_t l = 0; l < j; ++l) interf += g[i * users + l];
        rate = std::min(rate,
                        std::log2(1.0 + g[i * users + j] / (interf + sigma2)));
      }
      m.private_rates[order[j]] = rate;
    }
  }

  for (std::size_t k = 0; k < users; ++k) {
    double pref = 0.0;
    double logsum = 0.0;
    for (std::size_t n = 0; n < leds; ++n) {
      const double contrib = ch.at(k, n) * dim.dc_bias_a;
      if (a.selection[n])
        pref += sc.harvesting.fill_factor * sc.harvesting.thermal_voltage_v *
                contrib;
      if (!sc.eh_log_active_only || a.selection[n]) logsum += contrib;
    }
    m.harvested[k] =
        pref * std::log(1.0 + logsum / sc.harvesting.dark_saturation_a);
  }

  double beam_term = 0.0;
  for (std::size_t n = 0; n < leds; ++n) {
    if (!a.selection[n]) continue;
    if (sc.power_term_mode == PowerTermMode::Absolute) {
      double s = std::abs(a.beams.common[n]);
      for (std::size_t k = 0; k < users; ++k)
        s += std::abs(a.beams.private_[k * leds + n]);
      beam_term += s;
    } else {
      double s = a.beams.common[n];
      for (std::size_t k = 0; k < users; ++k)
        s += a.beams.private_[k * leds + n];
      beam_term += sc.power_term_mode == PowerTermMode::Squared ? s * s : s;
    }
  }
  m.total_power = sc.power.amplifier_factor * beam_term +
                  sc.power.conversion_factor_w_per_a * dim.n_active *
                      dim.dc_bias_a;
  for (std::size_t k = 0; k < users; ++k) m.total_power -= m.harvested[k];
}

// Verdicts, gated aggregate and reward for a given split, with the rate
// and power metrics already in place.
OracleEvaluation finish(const Scenario& sc, const DimmingState& dim,
                        const Metrics& m, const ActionVector& a) {
  const std::size_t users = m.private_rates.size();
  const double tol = sc.constraint_rel_tol;

  double split_sum = 0.0;
  for (double r : a.split.allocations) split_sum += r;
  double min_common = 0.0;
  if (!m.common_rates.empty()) {
    min_common = m.common_rates[0];
    for (double r : m.common_rates) min_common = std::min(min_common, r);
  }

  const bool c1 = holds(min_common, split_sum, tol);

  double aggregate = 0.0;
  for (std::size_t k = 0; k < users; ++k) {
    aggregate += m.private_rates[k];
    if (c1) aggregate += a.split.allocations[k];
  }

  double min_qos = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < users; ++k)
    min_qos = std::min(min_qos, a.split.allocations[k] + m.private_rates[k]);
  const bool c2 = holds(min_qos, sc.thresholds.qos, tol);

  const bool c3 = holds(sc.thresholds.p_max_w, m.total_power, tol);

  double min_har = std::numeric_limits<double>::infinity();
  for (double h : m.harvested) min_har = std::min(min_har, h);
  const bool c4 = holds(min_har, sc.thresholds.p_har_min_w, tol);

  int active = 0;
  bool binary = true;
  for (int s : a.selection) {
    if (s != 0 && s != 1) binary = false;
    active += s != 0 ? 1 : 0;
  }
  const bool c5 = binary && active == dim.n_active;

  const double i0 = sc.dimming.mid_bias();
  const double achieved = dim.n_active * (dim.dc_bias_a - sc.dimming.current_min_a) /
                          (sc.dimming.n_leds * (i0 - sc.dimming.current_min_a));
  const bool c6 = std::abs(achieved - sc.dimming.target_level) <=
                  sc.dimming_rel_tol * sc.dimming.target_level;

  bool c7 = true;
  for (std::size_t n = 0; n < a.selection.size(); ++n) {
    double s = std::abs(a.beams.common[n]);
    for (std::size_t k = 0; k < users; ++k)
      s += std::abs(a.beams.private_[k * a.selection.size() + n]);
    if (!holds(dim.amplitude_budget_a, s, tol)) c7 = false;
  }

  OracleEvaluation ev;
  ev.satisfied_count = c1 + c2 + c3 + c4 + c5 + c6 + c7;
  ev.feasible = ev.satisfied_count == 7;
  ev.aggregate = aggregate;
  ev.reward = sc.reward_mode == RewardMode::AsPaper
                  ? aggregate * (1.0 + ev.satisfied_count)
                  : aggregate - sc.penalty_weight * (7 - ev.satisfied_count);
  return ev;
}

void consider(OracleResult& result, const ActionVector& action,
              const OracleEvaluation& ev) {
  ++result.evaluations;
  if (result.evaluations == 1 || ev.reward > result.best_reward) {
    result.best_reward = ev.reward;
    result.best_action = action;
  }
  if (ev.feasible &&
      (!result.best_feasible_aggregate ||
       ev.aggregate > *result.best_feasible_aggregate))
    result.best_feasible_aggregate = ev.aggregate;
}

}  // namespace

std::vector<std::vector<int>> enumerate_selections(int n_leds, int n_active) {
  if (n_active < 0 || n_active > n_leds)
    throw std::invalid_argument("n_active out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> comb(n_active);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    std::vector<int> sel(n_leds, 0);
    for (int i : comb) sel[i] = 1;
    out.push_back(std::move(sel));
    // next combination in lexicographic index order
    int i = n_active - 1;
    while (i >= 0 && comb[i] == n_leds - n_active + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < n_active; ++j) comb[j] = comb[j - 1] + 1;
  }
  return out;
}

OracleEvaluation oracle_evaluate(const Scenario& scenario,
                                 const DimmingState& dimming,
                                 const ChannelMatrix& channels,
                                 const ActionVector& action) {
  Metrics m;
  compute_metrics(scenario, dimming, channels, action, m);
  return finish(scenario, dimming, m, action);
}

OracleResult grid_search(const Scenario& scenario, const DimmingState& dimming,
                         const ChannelMatrix& channels, const GridSpec& spec) {
  if (spec.beam_points < 1 || spec.split_points < 1)
    throw std::invalid_argument("grid spec needs at least one point per axis");
  const std::size_t users = channels.users;
  const std::size_t leds = channels.leds;
  const bool rsma = scenario.scheme == Scheme::Rsma;
  const int n_active = dimming.n_active;
  const double budget = dimming.amplitude_budget_a;

  const auto selections = enumerate_selections(static_cast<int>(leds), n_active);
  const std::size_t streams = rsma ? users + 1 : users;
  const std::size_t dims = static_cast<std::size_t>(n_active) * streams;

  std::vector<double> beam_values(static_cast<std::size_t>(spec.beam_points));
  if (spec.beam_points == 1) {
    beam_values[0] = 0.0;
  } else {
    for (int i = 0; i < spec.beam_points; ++i)
      beam_values[i] = -budget + 2.0 * budget * i / (spec.beam_points - 1);
  }

  std::vector<double> split_values(static_cast<std::size_t>(spec.split_points));
  if (spec.split_points == 1) {
    split_values[0] = 0.0;
  } else {
    for (int i = 0; i < spec.split_points; ++i)
      split_values[i] = scenario.split_max * i / (spec.split_points - 1);
  }

  // Evaluation count: selections * beam_points^dims * split candidates.
  double split_candidates = 1.0;
  if (rsma) {
    split_candidates =
        std::pow(static_cast<double>(spec.split_points),
                 static_cast<double>(users)) +
        1.0;  // grid plus the exact completion
  }
  const double total = static_cast<double>(selections.size()) *
                       std::pow(static_cast<double>(spec.beam_points),
                                static_cast<double>(dims)) *
                       split_candidates;
  if (total > static_cast<double>(spec.max_evaluations))
    throw std::runtime_error("oracle grid exceeds the evaluation cap");

  OracleResult result;
  ActionVector action;
  action.beams = Beamformers(users, leds);
  action.split.allocations.assign(users, 0.0);
  Metrics m;

  std::vector<int> odometer(dims, 0);
  std::vector<int> split_odometer(users, 0);

  for (const auto& selection : selections) {
    action.selection = selection;
    std::vector<int> active_leds;
    for (std::size_t n = 0; n < leds; ++n)
      if (selection[n]) active_leds.push_back(static_cast<int>(n));

    std::fill(odometer.begin(), odometer.end(), 0);
    while (true) {
      // Lay grid weights onto active LEDs; inactive columns stay zero.
      std::fill(action.beams.common.begin(), action.beams.common.end(), 0.0);
      std::fill(action.beams.private_.begin(), action.beams.private_.end(), 0.0);
      for (std::size_t a = 0; a < active_leds.size(); ++a) {
        const std::size_t n = static_cast<std::size_t>(active_leds[a]);
        std::size_t d = a * streams;
        double sum = 0.0;
        if (rsma) {
          action.beams.common[n] = beam_values[odometer[d++]];
          sum += std::abs(action.beams.common[n]);
        }
        for (std::size_t k = 0; k < users; ++k) {
          action.beams.private_at(k, n) = beam_values[odometer[d++]];
          sum += std::abs(action.beams.private_at(k, n));
        }
        if (sum > budget) {  // C7 by projection
          const double scale = budget / sum;
          action.beams.common[n] *= scale;
          for (std::size_t k = 0; k < users; ++k)
            action.beams.private_at(k, n) *= scale;
        }
      }

      compute_metrics(scenario, dimming, channels, action, m);

      if (!rsma) {
        std::fill(action.split.allocations.begin(),
                  action.split.allocations.end(), 0.0);
        consider(result, action, finish(scenario, dimming, m, action));
      } else {
        std::fill(split_odometer.begin(), split_odometer.end(), 0);
        while (true) {
          for (std::size_t k = 0; k < users; ++k)
            action.split.allocations[k] = split_values[split_odometer[k]];
          consider(result, action, finish(scenario, dimming, m, action));
          std::size_t c = 0;
          while (c < users && ++split_odometer[c] == spec.split_points) {
            split_odometer[c] = 0;
            ++c;
          }
          if (c == users) break;
        }

        // Exact completion: spend the whole decodable common rate, shaped
        // to cover per-user QoS deficits first.
        double min_common = m.common_rates.empty() ? 0.0 : m.common_rates[0];
        for (double r : m.common_rates) min_common = std::min(min_common, r);
        const double total_split = std::max(0.0, min_common * (1.0 - 1e-12));
        double need_sum = 0.0;
        std::vector<double> need(users, 0.0);
        for (std::size_t k = 0; k < users; ++k) {
          need[k] = std::max(0.0, scenario.thresholds.qos - m.private_rates[k]);
          need_sum += need[k];
        }
        if (need_sum <= total_split) {
          for (std::size_t k = 0; k < users; ++k)
            action.split.allocations[k] = need[k];
          action.split.allocations[0] += total_split - need_sum;
        } else {
          const double scale = need_sum > 0.0 ? total_split / need_sum : 0.0;
          for (std::size_t k = 0; k < users; ++k)
            action.split.allocations[k] = need[k] * scale;
        }
        consider(result, action, finish(scenario, dimming, m, action));
      }

      std::size_t c = 0;
      while (c < dims && ++odometer[c] == spec.beam_points) {
        odometer[c] = 0;
        ++c;
      }
      if (c == dims) break;
    }
  }
  return result;
}

OracleResult random_search(const Scenario& scenario,
                           const DimmingState& dimming,
                           const ChannelMatrix& channels, std::uint64_t budget,
                           Rng& rng) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  const std::size_t users = channels.users;
  const std::size_t leds = channels.leds;
  const bool rsma = scenario.scheme == Scheme::Rsma;
  const double xi = dimming.amplitude_budget_a;

  OracleResult result;
  ActionVector action;
  action.beams = Beamformers(users, leds);
  action.split.allocations.assign(users, 0.0);
  Metrics m;
  std::vector<int> indices(leds);

  for (std::uint64_t it = 0; it < budget; ++it) {
    // Uniform N_a-subset.
    std::iota(indices.begin(), indices.end(), 0);
    for (std::size_t i = leds; i > 1; --i)
      std::swap(indices[i - 1], indices[rng.uniform_int(static_cast<int>(i))]);
    action.selection.assign(leds, 0);
    for (int i = 0; i < dimming.n_active; ++i) action.selection[indices[i]] = 1;

    std::fill(action.beams.common.begin(), action.beams.common.end(), 0.0);
    std::fill(action.beams.private_.begin(), action.beams.private_.end(), 0.0);
    for (std::size_t n = 0; n < leds; ++n) {
      if (!action.selection[n]) continue;
      double sum = 0.0;
      if (rsma) {
        action.beams.common[n] = rng.uniform(-xi, xi);
        sum += std::abs(action.beams.common[n]);
      }
      for (std::size_t k = 0; k < users; ++k) {
        action.beams.private_at(k, n) = rng.uniform(-xi, xi);
        sum += std::abs(action.beams.private_at(k, n));
      }
      if (sum > xi) {
        const double scale = xi / sum;
        action.beams.common[n] *= scale;
        for (std::size_t k = 0; k < users; ++k)
          action.beams.private_at(k, n) *= scale;
      }
    }
    for (std::size_t k = 0; k < users; ++k)
      action.split.allocations[k] =
          rsma ? rng.uniform(0.0, scenario.split_max) : 0.0;

    compute_metrics(scenario, dimming, channels, action, m);
    consider(result, action, finish(scenario, dimming, m, action));
  }
  return result;
}

}  // namespace owc
