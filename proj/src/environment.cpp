#include "owc/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace owc {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Split transform bias: a zero raw coordinate maps to a near-zero split, so
// freshly initialized policies start on the decodable side of C1 and climb
// toward the min-common-rate boundary instead of being stranded above it.
constexpr double kSplitLogitShift = 4.0;

// lhs >= rhs up to a relative slack scaled by the larger magnitude.
bool holds(double lhs, double rhs, double rel_tol) {
  return lhs - rhs >= -rel_tol * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

int ConstraintVerdict::satisfied_count() const {
  return static_cast<int>(std::count(satisfied.begin(), satisfied.end(), true));
}

bool ConstraintVerdict::all_satisfied() const { return satisfied_count() == 7; }

std::size_t raw_continuous_dim(std::size_t users, std::size_t leds) {
  return leds * (users + 1) + users;
}

std::size_t raw_action_dim(std::size_t users, std::size_t leds) {
  return raw_continuous_dim(users, leds) + leds;
}

std::vector<int> descending_order(std::span<const double> values) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return idx;
}

ActionVector assemble_action(const Scenario& scenario,
                             std::span<const double> continuous,
                             std::span<const int> selected_leds,
                             double amplitude_budget_a) {
  const std::size_t users = static_cast<std::size_t>(scenario.user_count);
  const std::size_t leds = scenario.led_count();
  if (continuous.size() != raw_continuous_dim(users, leds))
    throw std::invalid_argument("continuous action dimension mismatch");

  ActionVector action;
  action.beams = Beamformers(users, leds);
  action.selection.assign(leds, 0);
  for (int n : selected_leds) action.selection[static_cast<std::size_t>(n)] = 1;

  const bool noma = scenario.scheme == Scheme::Noma;
  for (std::size_t n = 0; n < leds; ++n)
    action.beams.common[n] = noma ? 0.0 : continuous[n];
  for (std::size_t k = 0; k < users; ++k)
    for (std::size_t n = 0; n < leds; ++n)
      action.beams.private_at(k, n) = continuous[leds + k * leds + n];

  // Per-LED uniform downscale onto the amplitude budget (C7).
  for (std::size_t n = 0; n < leds; ++n) {
    double sum = std::abs(action.beams.common[n]);
    for (std::size_t k = 0; k < users; ++k)
      sum += std::abs(action.beams.private_at(k, n));
    if (sum > amplitude_budget_a) {
      const double scale = sum > 0.0 ? amplitude_budget_a / sum : 0.0;
      action.beams.common[n] *= scale;
      for (std::size_t k = 0; k < users; ++k)
        action.beams.private_at(k, n) *= scale;
    }
  }

  action.split.allocations.assign(users, 0.0);
  if (!noma) {
    const std::size_t split_base = leds * (users + 1);
    for (std::size_t k = 0; k < users; ++k)
      action.split.allocations[k] =
          scenario.split_max *
          sigmoid(continuous[split_base + k] - kSplitLogitShift);
  }
  return action;
}

ActionVector project_action(const Scenario& scenario,
                            std::span<const double> raw, int n_active,
                            double amplitude_budget_a) {
  const std::size_t users = static_cast<std::size_t>(scenario.user_count);
  const std::size_t leds = scenario.led_count();
  if (raw.size() != raw_action_dim(users, leds))
    throw std::invalid_argument("raw action dimension mismatch");

  const std::size_t cont = raw_continuous_dim(users, leds);
  const auto order = descending_order(raw.subspan(cont, leds));
  const std::span<const int> selected(order.data(),
                                      static_cast<std::size_t>(n_active));
  return assemble_action(scenario, raw.first(cont), selected,
                         amplitude_budget_a);
}

Evaluation evaluate(const Scenario& scenario, const DimmingState& dimming,
                    const ChannelMatrix& channels, const ActionVector& action) {
  Evaluation ev;
  const std::size_t users = channels.users;
  const std::size_t leds = channels.leds;
  const double tol = scenario.constraint_rel_tol;

  ev.metrics.rates =
      scenario.scheme == Scheme::Noma
          ? noma_rates(channels, action.selection, action.beams,
                       scenario.noise_variance_w)
          : rsma_rates(channels, action.selection, action.beams, action.split,
                       scenario.noise_variance_w, tol);

  ev.metrics.harvested.resize(users);
  for (std::size_t k = 0; k < users; ++k)
    ev.metrics.harvested[k] =
        harvested_power(k, channels, action.selection, dimming.dc_bias_a,
                        scenario.harvesting, scenario.eh_log_active_only);

  ev.metrics.total_power =
      total_power(action.beams, action.selection, dimming.dc_bias_a,
                  dimming.n_active, ev.metrics.harvested, scenario.power,
                  scenario.power_term_mode);

  auto& v = ev.verdict;

  // C1: worst-user common rate covers the whole split.
  const double split_sum = action.split.allocations.empty()
                               ? 0.0
                               : action.split.sum();
  const double min_common =
      ev.metrics.rates.common_rates.empty()
          ? 0.0
          : *std::min_element(ev.metrics.rates.common_rates.begin(),
                              ev.metrics.rates.common_rates.end());
  v.margins[0] = min_common - split_sum;
  v.satisfied[0] = holds(min_common, split_sum, tol);

  // C2: per-user QoS on split credit plus private rate.
  double min_qos_lhs = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < users; ++k)
    min_qos_lhs = std::min(min_qos_lhs, action.split.allocations[k] +
                                            ev.metrics.rates.private_rates[k]);
  v.margins[1] = min_qos_lhs - scenario.thresholds.qos;
  v.satisfied[1] = holds(min_qos_lhs, scenario.thresholds.qos, tol);

  // C3: power budget.
  v.margins[2] = scenario.thresholds.p_max_w - ev.metrics.total_power;
  v.satisfied[2] = holds(scenario.thresholds.p_max_w, ev.metrics.total_power, tol);

  // C4: harvesting floor at the worst user.
  const double min_har = *std::min_element(ev.metrics.harvested.begin(),
                                           ev.metrics.harvested.end());
  v.margins[3] = min_har - scenario.thresholds.p_har_min_w;
  v.satisfied[3] = holds(min_har, scenario.thresholds.p_har_min_w, tol);

  // C5: binary selection with exactly N_a active entries.
  int active = 0;
  bool binary = true;
  for (int a : action.selection) {
    if (a != 0 && a != 1) binary = false;
    active += a != 0 ? 1 : 0;
  }
  v.satisfied[4] = binary && active == dimming.n_active;
  v.margins[4] = v.satisfied[4] ? 0.0 : -1.0;

  // C6: the (N_a, i_DC) pair realizes the target dimming level.
  const double achieved =
      achieved_dimming(dimming.n_active, dimming.dc_bias_a, scenario.dimming);
  const double dim_err =
      std::abs(achieved - scenario.dimming.target_level) /
      scenario.dimming.target_level;
  v.margins[5] = scenario.dimming_rel_tol - dim_err;
  v.satisfied[5] = dim_err <= scenario.dimming_rel_tol;

  // C7: per-LED amplitude budget.
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < leds; ++n) {
    double sum = std::abs(action.beams.common[n]);
    for (std::size_t k = 0; k < users; ++k)
      sum += std::abs(action.beams.private_at(k, n));
    min_slack = std::min(min_slack, dimming.amplitude_budget_a - sum);
  }
  v.margins[6] = min_slack;
  v.satisfied[6] = holds(min_slack + dimming.amplitude_budget_a,
                         dimming.amplitude_budget_a, tol);

  return ev;
}

double reward(const SystemMetrics& metrics, const ConstraintVerdict& verdict,
              RewardMode mode, double penalty_weight) {
  const double agg = metrics.aggregate();
  if (mode == RewardMode::AsPaper)
    return agg * (1.0 + verdict.satisfied_count());
  return agg - penalty_weight * (7 - verdict.satisfied_count());
}

Environment::Environment(Scenario scenario, std::uint64_t seed)
    : scenario_(std::move(scenario)),
      dimming_(make_dimming_state(scenario_.dimming)),
      rng_(seed) {
  scenario_.validate();
}

Environment::Environment(Scenario scenario)
    : Environment(scenario, scenario.seed) {}

std::size_t Environment::state_dim() const {
  const std::size_t k = static_cast<std::size_t>(scenario_.user_count);
  const std::size_t n = scenario_.led_count();
  std::size_t dim = 3 * k + n * (k + 1);
  if (scenario_.augment_state_with_channels) dim += k * n;
  return dim;
}

std::size_t Environment::raw_dim() const {
  return raw_action_dim(static_cast<std::size_t>(scenario_.user_count),
                        scenario_.led_count());
}

StateVector Environment::reset() {
  return reset_with_users(sample_user_positions(scenario_, rng_));
}

StateVector Environment::reset_with_users(std::vector<Photodiode> users) {
  if (users.size() != static_cast<std::size_t>(scenario_.user_count))
    throw std::invalid_argument("placement user count mismatch");
  users_ = std::move(users);
  channels_ = channel_matrix_for(scenario_, users_);
  step_count_ = 0;
  episode_open_ = true;
  StateVector state(state_dim(), 0.0);
  if (scenario_.augment_state_with_channels) {
    const std::size_t base = state_dim() - channels_.gains.size();
    std::copy(channels_.gains.begin(), channels_.gains.end(),
              state.begin() + static_cast<std::ptrdiff_t>(base));
  }
  return state;
}

StateVector Environment::state_from(const SystemMetrics& metrics,
                                    const ActionVector& action) const {
  StateVector state;
  state.reserve(state_dim());
  state.insert(state.end(), metrics.rates.common_rates.begin(),
               metrics.rates.common_rates.end());
  state.insert(state.end(), metrics.rates.private_rates.begin(),
               metrics.rates.private_rates.end());
  state.insert(state.end(), metrics.harvested.begin(), metrics.harvested.end());
  state.insert(state.end(), action.beams.common.begin(),
               action.beams.common.end());
  state.insert(state.end(), action.beams.private_.begin(),
               action.beams.private_.end());
  if (scenario_.augment_state_with_channels)
    state.insert(state.end(), channels_.gains.begin(), channels_.gains.end());
  if (state.size() != state_dim())
    throw std::logic_error("state dimension drifted");
  return state;
}

Environment::StepResult Environment::step(const ActionVector& action) {
  if (!episode_open_) throw std::logic_error("episode not started");
  if (step_count_ >= scenario_.episode_length)
    throw std::logic_error("stepping a terminated episode");
  Evaluation ev = evaluate(scenario_, dimming_, channels_, action);
  StepResult result;
  result.reward = reward(ev.metrics, ev.verdict, scenario_.reward_mode,
                         scenario_.penalty_weight);
  result.state = state_from(ev.metrics, action);
  result.metrics = std::move(ev.metrics);
  result.verdict = ev.verdict;
  ++step_count_;
  result.done = step_count_ >= scenario_.episode_length;
  return result;
}

Environment::StepResult Environment::step_raw(std::span<const double> raw) {
  return step(project(raw));
}

ActionVector Environment::project(std::span<const double> raw) const {
  return project_action(scenario_, raw, dimming_.n_active,
                        dimming_.amplitude_budget_a);
}

}  // namespace owc
