#include "owc/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "owc/text.hpp"

namespace owc {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

double logsumexp_masked(std::span<const double> z, const std::vector<char>& in) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i)
    if (in[i]) m = std::max(m, z[i]);
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (in[i]) acc += std::exp(z[i] - m);
  return m + std::log(acc);
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void PpoHyperparams::validate() const {
  if (!(clip_eps > 0.0 && clip_eps < 1.0))
    throw std::invalid_argument("clip_eps must be in (0, 1)");
  if (!(discount >= 0.0 && discount < 1.0))
    throw std::invalid_argument("discount must be in [0, 1)");
  if (!(actor_lr > 0.0 && critic_lr > 0.0))
    throw std::invalid_argument("learning rates must be positive");
  if (minibatch < 1) throw std::invalid_argument("minibatch must be >= 1");
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (hidden < 1) throw std::invalid_argument("hidden width must be >= 1");
  if (!(log_std_min < log_std_max))
    throw std::invalid_argument("log_std bounds inverted");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0))
    throw std::invalid_argument("gae_lambda must be in [0, 1]");
  if (!(entropy_coef >= 0.0))
    throw std::invalid_argument("entropy_coef must be nonnegative");
}

Mlp::Mlp(int input_dim, int hidden_dim, int output_dim)
    : in_(input_dim), hidden_(hidden_dim), out_(output_dim) {
  if (in_ < 1 || hidden_ < 1 || out_ < 1)
    throw std::invalid_argument("MLP dimensions must be positive");
  params.assign(static_cast<std::size_t>(hidden_) * in_ + hidden_ +
                    static_cast<std::size_t>(hidden_) * hidden_ + hidden_ +
                    static_cast<std::size_t>(out_) * hidden_ + out_,
                0.0);
}

void Mlp::init(Rng& rng) {
  std::size_t p = 0;
  auto fill = [&](std::size_t count, int fan_in) {
    const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) params[p++] = rng.uniform(-s, s);
  };
  fill(static_cast<std::size_t>(hidden_) * in_, in_);
  fill(static_cast<std::size_t>(hidden_), in_);
  fill(static_cast<std::size_t>(hidden_) * hidden_, hidden_);
  fill(static_cast<std::size_t>(hidden_), hidden_);
  fill(static_cast<std::size_t>(out_) * hidden_, hidden_);
  fill(static_cast<std::size_t>(out_), hidden_);
}

void Mlp::forward(std::span<const double> x, Workspace& ws) const {
  if (static_cast<int>(x.size()) != in_)
    throw std::invalid_argument("MLP input dimension mismatch");
  ws.input.assign(x.begin(), x.end());
  ws.act1.resize(static_cast<std::size_t>(hidden_));
  ws.act2.resize(static_cast<std::size_t>(hidden_));
  ws.output.resize(static_cast<std::size_t>(out_));

  const double* w1 = params.data();
  const double* b1 = w1 + static_cast<std::size_t>(hidden_) * in_;
  const double* w2 = b1 + hidden_;
  const double* b2 = w2 + static_cast<std::size_t>(hidden_) * hidden_;
  const double* w3 = b2 + hidden_;
  const double* b3 = w3 + static_cast<std::size_t>(out_) * hidden_;

  for (int h = 0; h < hidden_; ++h) {
    double acc = b1[h];
    const double* row = w1 + static_cast<std::size_t>(h) * in_;
    for (int i = 0; i < in_; ++i) acc += row[i] * x[i];
    ws.act1[h] = std::tanh(acc);
  }
  for (int h = 0; h < hidden_; ++h) {
    double acc = b2[h];
    const double* row = w2 + static_cast<std::size_t>(h) * hidden_;
    for (int i = 0; i < hidden_; ++i) acc += row[i] * ws.act1[i];
    ws.act2[h] = std::tanh(acc);
  }
  for (int o = 0; o < out_; ++o) {
    double acc = b3[o];
    const double* row = w3 + static_cast<std::size_t>(o) * hidden_;
    for (int i = 0; i < hidden_; ++i) acc += row[i] * ws.act2[i];
    ws.output[o] = acc;
  }
}

void Mlp::backward(const Workspace& ws, std::span<const double> grad_out,
                   std::span<double> grad) const {
  if (static_cast<int>(grad_out.size()) != out_ ||
      grad.size() != params.size())
    throw std::invalid_argument("MLP backward dimension mismatch");

  const std::size_t w1_off = 0;
  const std::size_t b1_off = w1_off + static_cast<std::size_t>(hidden_) * in_;
  const std::size_t w2_off = b1_off + hidden_;
  const std::size_t b2_off = w2_off + static_cast<std::size_t>(hidden_) * hidden_;
  const std::size_t w3_off = b2_off + hidden_;
  const std::size_t b3_off = w3_off + static_cast<std::size_t>(out_) * hidden_;

  // Output layer.
  for (int o = 0; o < out_; ++o) {
    const double g = grad_out[o];
    double* row = grad.data() + w3_off + static_cast<std::size_t>(o) * hidden_;
    for (int h = 0; h < hidden_; ++h) row[h] += g * ws.act2[h];
    grad[b3_off + o] += g;
  }

  // Back through layer 2.
  std::vector<double> g_pre2(static_cast<std::size_t>(hidden_), 0.0);
  const double* w3 = params.data() + w3_off;
  for (int h = 0; h < hidden_; ++h) {
    double acc = 0.0;
    for (int o = 0; o < out_; ++o)
      acc += grad_out[o] * w3[static_cast<std::size_t>(o) * hidden_ + h];
    g_pre2[h] = acc * (1.0 - ws.act2[h] * ws.act2[h]);
  }
  for (int h = 0; h < hidden_; ++h) {
    const double g = g_pre2[h];
    double* row = grad.data() + w2_off + static_cast<std::size_t>(h) * hidden_;
    for (int i = 0; i < hidden_; ++i) row[i] += g * ws.act1[i];
    grad[b2_off + h] += g;
  }

  // Back through layer 1.
  const double* w2 = params.data() + w2_off;
  for (int h = 0; h < hidden_; ++h) {
    double acc = 0.0;
    for (int j = 0; j < hidden_; ++j)
      acc += g_pre2[j] * w2[static_cast<std::size_t>(j) * hidden_ + h];
    const double g = acc * (1.0 - ws.act1[h] * ws.act1[h]);
    double* row = grad.data() + w1_off + static_cast<std::size_t>(h) * in_;
    for (int i = 0; i < in_; ++i) row[i] += g * ws.input[i];
    grad[b1_off + h] += g;
  }
}

Actor::Actor(int state_dim, int cont_dim, int logit_dim,
             const PpoHyperparams& hp)
    : net(state_dim, hp.hidden, cont_dim + logit_dim),
      log_std_raw(static_cast<std::size_t>(cont_dim), hp.log_std_init),
      cont_dim_(cont_dim),
      logit_dim_(logit_dim),
      log_std_min_(hp.log_std_min),
      log_std_max_(hp.log_std_max) {}

int Actor::param_count() const { return net.param_count() + cont_dim_; }

void Actor::init(Rng& rng) { net.init(rng); }

double Actor::get_param(int i) const {
  return i < net.param_count() ? net.params[i]
                               : log_std_raw[i - net.param_count()];
}

void Actor::set_param(int i, double v) {
  if (i < net.param_count())
    net.params[i] = v;
  else
    log_std_raw[i - net.param_count()] = v;
}

void Actor::add_scaled(std::span<const double> grad, double scale) {
  for (int i = 0; i < net.param_count(); ++i) net.params[i] += scale * grad[i];
  for (int i = 0; i < cont_dim_; ++i)
    log_std_raw[i] += scale * grad[net.param_count() + i];
}

double Actor::clamped_log_std(int i) const {
  return std::clamp(log_std_raw[i], log_std_min_, log_std_max_);
}

ActorOutput Actor::forward(std::span<const double> state) const {
  Mlp::Workspace ws;
  net.forward(state, ws);
  ActorOutput out;
  out.mean.assign(ws.output.begin(), ws.output.begin() + cont_dim_);
  out.logits.assign(ws.output.begin() + cont_dim_, ws.output.end());
  out.log_std.resize(cont_dim_);
  for (int i = 0; i < cont_dim_; ++i) out.log_std[i] = clamped_log_std(i);
  return out;
}

double top_k_log_prob(std::span<const double> logits,
                      std::span<const int> order) {
  std::vector<char> in(logits.size(), 1);
  double logp = 0.0;
  for (int pick : order) {
    logp += logits[pick] - logsumexp_masked(logits, in);
    in[pick] = 0;
  }
  return logp;
}

double Actor::log_prob(std::span<const double> state,
                       std::span<const double> cont,
                       std::span<const int> order) const {
  const ActorOutput out = forward(state);
  double logp = 0.0;
  for (int i = 0; i < cont_dim_; ++i) {
    const double ls = out.log_std[i];
    const double z = (cont[i] - out.mean[i]) * std::exp(-ls);
    logp += -0.5 * z * z - ls - 0.5 * kLogTwoPi;
  }
  return logp + top_k_log_prob(out.logits, order);
}

double Actor::log_prob_with_grad(std::span<const double> state,
                                 std::span<const double> cont,
                                 std::span<const int> order, double coef,
                                 std::span<double> grad) const {
  Mlp::Workspace ws;
  net.forward(state, ws);

  double logp = 0.0;
  std::vector<double> grad_out(static_cast<std::size_t>(net.output_dim()), 0.0);

  for (int i = 0; i < cont_dim_; ++i) {
    const double ls = clamped_log_std(i);
    const double inv_sigma = std::exp(-ls);
    const double z = (cont[i] - ws.output[i]) * inv_sigma;
    logp += -0.5 * z * z - ls - 0.5 * kLogTwoPi;
    grad_out[i] = z * inv_sigma;  // d logp / d mean_i
    // d logp / d log_std_i, zero where the clamp is active.
    if (log_std_raw[i] > log_std_min_ && log_std_raw[i] < log_std_max_)
      grad[net.param_count() + i] += coef * (z * z - 1.0);
  }

  const std::span<const double> logits(ws.output.data() + cont_dim_,
                                       static_cast<std::size_t>(logit_dim_));
  std::vector<char> in(static_cast<std::size_t>(logit_dim_), 1);
  for (int pick : order) {
    const double lse = logsumexp_masked(logits, in);
    logp += logits[pick] - lse;
    for (int m = 0; m < logit_dim_; ++m)
      if (in[m]) grad_out[cont_dim_ + m] -= std::exp(logits[m] - lse);
    grad_out[cont_dim_ + pick] += 1.0;
    in[pick] = 0;
  }

  if (coef != 0.0) {
    for (double& g : grad_out) g *= coef;
    net.backward(ws, grad_out, grad.first(net.param_count()));
  }
  return logp;
}

double Actor::continuous_entropy() const {
  double h = 0.0;
  for (int i = 0; i < cont_dim_; ++i)
    h += clamped_log_std(i) + 0.5 * (kLogTwoPi + 1.0);
  return h;
}

void Actor::add_entropy_grad(double coef, std::span<double> grad) const {
  for (int i = 0; i < cont_dim_; ++i)
    if (log_std_raw[i] > log_std_min_ && log_std_raw[i] < log_std_max_)
      grad[net.param_count() + i] += coef;
}

Critic::Critic(int state_dim, const PpoHyperparams& hp)
    : net(state_dim, hp.hidden, 1) {}

void Critic::init(Rng& rng) { net.init(rng); }

double Critic::value(std::span<const double> state) const {
  Mlp::Workspace ws;
  net.forward(state, ws);
  return ws.output[0];
}

double Critic::value_with_grad(std::span<const double> state, double coef,
                               std::span<double> grad) const {
  Mlp::Workspace ws;
  net.forward(state, ws);
  const double g[1] = {coef};
  net.backward(ws, g, grad);
  return ws.output[0];
}

PolicySample policy_sample(const Actor& actor, std::span<const double> state,
                           int n_active, Rng& rng) {
  const ActorOutput out = actor.forward(state);
  PolicySample s;
  s.cont.resize(out.mean.size());
  for (std::size_t i = 0; i < out.mean.size(); ++i)
    s.cont[i] = out.mean[i] + std::exp(out.log_std[i]) * rng.normal();

  std::vector<double> noisy(out.logits.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    noisy[i] = out.logits[i] - std::log(-std::log(u));
  }
  const auto full = descending_order(noisy);
  s.order.assign(full.begin(), full.begin() + n_active);

  double logp = 0.0;
  for (std::size_t i = 0; i < out.mean.size(); ++i) {
    const double z = (s.cont[i] - out.mean[i]) * std::exp(-out.log_std[i]);
    logp += -0.5 * z * z - out.log_std[i] - 0.5 * kLogTwoPi;
  }
  s.log_prob = logp + top_k_log_prob(out.logits, s.order);
  return s;
}

PolicySample greedy_action(const Actor& actor, std::span<const double> state,
                           int n_active) {
  const ActorOutput out = actor.forward(state);
  PolicySample s;
  s.cont = out.mean;
  const auto full = descending_order(out.logits);
  s.order.assign(full.begin(), full.begin() + n_active);
  s.log_prob = 0.0;
  return s;
}

double advantage(const Transition& t, const Critic& critic_old,
                 double discount) {
  const double bootstrap =
      t.terminal ? 0.0 : discount * critic_old.value(t.next_state);
  return t.reward + bootstrap - critic_old.value(t.state);
}

double clipped_surrogate(double ratio, double advantage, double clip_eps) {
  const double clipped =
      std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * advantage;
  return std::min(ratio * advantage, clipped);
}

double actor_update(Actor& actor, std::span<const Transition> pool,
                    std::span<const int> batch,
                    std::span<const double> advantages,
                    const PpoHyperparams& hp) {
  std::vector<double> grad(static_cast<std::size_t>(actor.param_count()), 0.0);
  double surrogate_sum = 0.0;
  for (int q : batch) {
    const Transition& t = pool[q];
    const double omega = advantages[q];
    const double logp = actor.log_prob(t.state, t.cont, t.order);
    const double ratio = std::exp(logp - t.log_prob_old);
    if (!std::isfinite(ratio))
      throw std::runtime_error("actor update: non-finite probability ratio");
    surrogate_sum += clipped_surrogate(ratio, omega, hp.clip_eps);
    const bool active = omega >= 0.0 ? ratio < 1.0 + hp.clip_eps
                                     : ratio > 1.0 - hp.clip_eps;
    if (active)
      actor.log_prob_with_grad(t.state, t.cont, t.order, ratio * omega, grad);
  }
  const double inv_q = 1.0 / static_cast<double>(batch.size());
  for (double& g : grad) g *= inv_q;
  if (hp.entropy_coef > 0.0) actor.add_entropy_grad(hp.entropy_coef, grad);
  if (!all_finite(grad))
    throw std::runtime_error("actor update: non-finite gradient");
  // Ascent on the surrogate.
  actor.add_scaled(grad, hp.actor_lr);
  return surrogate_sum * inv_q;
}

double critic_update(Critic& critic, const Critic& critic_old,
                     std::span<const Transition> pool,
                     std::span<const int> batch, const PpoHyperparams& hp) {
  std::vector<double> grad(critic.net.params.size(), 0.0);
  double loss_sum = 0.0;
  for (int q : batch) {
    const Transition& t = pool[q];
    const double target =
        t.reward +
        (t.terminal ? 0.0 : hp.discount * critic_old.value(t.next_state));
    const double v = critic.value(t.state);
    loss_sum += (v - target) * (v - target);
    critic.value_with_grad(t.state, 2.0 * (v - target), grad);
  }
  const double inv_q = 1.0 / static_cast<double>(batch.size());
  if (!all_finite(grad))
    throw std::runtime_error("critic update: non-finite gradient");
  for (std::size_t i = 0; i < grad.size(); ++i)
    critic.net.params[i] -= hp.critic_lr * inv_q * grad[i];
  return loss_sum * inv_q;
}

RunningNormalizer::RunningNormalizer(std::size_t dim)
    : mean_(dim, 0.0),
      m2_(dim, 0.0),
      pending_mean_(dim, 0.0),
      pending_m2_(dim, 0.0) {}

void RunningNormalizer::observe(std::span<const double> x) {
  pending_count_ += 1.0;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double d = x[i] - pending_mean_[i];
    pending_mean_[i] += d / pending_count_;
    pending_m2_[i] += d * (x[i] - pending_mean_[i]);
  }
}

void RunningNormalizer::commit() {
  if (pending_count_ == 0.0) return;
  const double total = count_ + pending_count_;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = pending_mean_[i] - mean_[i];
    mean_[i] += delta * pending_count_ / total;
    m2_[i] += pending_m2_[i] + delta * delta * count_ * pending_count_ / total;
    pending_mean_[i] = 0.0;
    pending_m2_[i] = 0.0;
  }
  count_ = total;
  pending_count_ = 0.0;
}

void RunningNormalizer::normalize(std::span<const double> x,
                                  std::span<double> out) const {
  if (count_ == 0.0) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < mean_.size(); ++i)
    out[i] = (x[i] - mean_[i]) / std::sqrt(m2_[i] / count_ + 1e-8);
}

StateVector RunningNormalizer::normalized(std::span<const double> x) const {
  StateVector out(x.size());
  normalize(x, out);
  return out;
}

void RunningNormalizer::restore(double count, std::vector<double> mean,
                                std::vector<double> m2) {
  count_ = count;
  mean_ = std::move(mean);
  m2_ = std::move(m2);
  pending_count_ = 0.0;
  pending_mean_.assign(mean_.size(), 0.0);
  pending_m2_.assign(mean_.size(), 0.0);
}

TrainResult train(Environment& env, const PpoHyperparams& hp,
                  std::uint64_t seed) {
  hp.validate();
  if (hp.steps != env.scenario().episode_length)
    throw std::invalid_argument("hp.steps must match the episode length");

  Rng rng(seed);
  const int state_dim = static_cast<int>(env.state_dim());
  const int cont_dim = static_cast<int>(raw_continuous_dim(
      static_cast<std::size_t>(env.scenario().user_count),
      env.scenario().led_count()));
  const int logit_dim = static_cast<int>(env.scenario().led_count());

  Actor actor(state_dim, cont_dim, logit_dim, hp);
  actor.init(rng);
  Critic critic(state_dim, hp);
  critic.init(rng);
  Actor actor_old = actor;
  Critic critic_old = critic;
  RunningNormalizer norm(static_cast<std::size_t>(state_dim));

  TrainResult result{std::move(actor), std::move(critic), std::move(norm), {}};
  result.log.reserve(static_cast<std::size_t>(hp.episodes));

  std::vector<Transition> pool;
  pool.reserve(static_cast<std::size_t>(hp.steps));
  std::vector<double> advantages(static_cast<std::size_t>(hp.steps));
  std::vector<int> indices(static_cast<std::size_t>(hp.steps));

  for (int episode = 1; episode <= hp.episodes; ++episode) {
    StateVector raw_state = env.reset();
    pool.clear();
    double reward_sum = 0.0;
    double sat_sum = 0.0;

    for (int t = 0; t < hp.steps; ++t) {
      result.normalizer.observe(raw_state);
      Transition tr;
      tr.state = result.normalizer.normalized(raw_state);
      PolicySample sample =
          policy_sample(actor_old, tr.state, env.n_active(), rng);
      const ActionVector action =
          assemble_action(env.scenario(), sample.cont, sample.order,
                          env.amplitude_budget());
      auto step = env.step(action);
      tr.next_state = result.normalizer.normalized(step.state);
      tr.cont = std::move(sample.cont);
      tr.order = std::move(sample.order);
      tr.log_prob_old = sample.log_prob;
      tr.reward = step.reward;
      tr.terminal = step.done;
      pool.push_back(std::move(tr));
      reward_sum += step.reward;
      sat_sum += step.verdict.satisfied_count() / 7.0;
      raw_state = std::move(step.state);
    }

    if (hp.use_gae) {
      double carry = 0.0;
      for (int t = hp.steps - 1; t >= 0; --t) {
        const double delta = advantage(pool[t], critic_old, hp.discount);
        carry = pool[t].terminal ? delta
                                 : delta + hp.discount * hp.gae_lambda * carry;
        advantages[t] = carry;
      }
    } else {
      for (int t = 0; t < hp.steps; ++t)
        advantages[t] = advantage(pool[t], critic_old, hp.discount);
    }

    for (int i = 0; i < hp.steps; ++i) indices[i] = i;
    for (int i = hp.steps - 1; i > 0; --i)
      std::swap(indices[i], indices[rng.uniform_int(i + 1)]);

    double surrogate_sum = 0.0, loss_sum = 0.0;
    int updates = 0;
    for (int start = 0; start < hp.steps; start += hp.minibatch) {
      const int count = std::min(hp.minibatch, hp.steps - start);
      const std::span<const int> batch(indices.data() + start,
                                       static_cast<std::size_t>(count));
      surrogate_sum += actor_update(result.actor, pool, batch, advantages, hp);
      loss_sum += critic_update(result.critic, critic_old, pool, batch, hp);
      ++updates;
    }

    actor_old = result.actor;
    critic_old = result.critic;
    result.normalizer.commit();

    EpisodeLog log;
    log.episode = episode;
    log.mean_reward = reward_sum / hp.steps;
    log.mean_surrogate = surrogate_sum / updates;
    log.mean_critic_loss = loss_sum / updates;
    log.sat_rate = sat_sum / hp.steps;
    result.log.push_back(log);
  }
  return result;
}

Environment::StepResult greedy_step(Environment& env, const Actor& actor,
                                    const RunningNormalizer& norm,
                                    const StateVector& raw_state) {
  const StateVector state = norm.normalized(raw_state);
  const PolicySample sample = greedy_action(actor, state, env.n_active());
  const ActionVector action = assemble_action(
      env.scenario(), sample.cont, sample.order, env.amplitude_budget());
  return env.step(action);
}

namespace {

void write_vector(std::ostream& out, const char* tag,
                  std::span<const double> v) {
  out << tag << ' ' << v.size() << '\n';
  for (std::size_t i = 0; i < v.size(); ++i)
    out << format_double(v[i]) << (i + 1 == v.size() ? '\n' : ' ');
  if (v.empty()) out << '\n';
}

std::vector<double> read_vector(std::istream& in, const std::string& tag) {
  std::string got;
  std::size_t count = 0;
  in >> got >> count;
  if (got != tag) throw std::runtime_error("checkpoint: expected " + tag);
  std::vector<double> v(count);
  std::string tok;
  for (auto& x : v) {
    in >> tok;
    x = parse_double(tok);
  }
  if (!in) throw std::runtime_error("checkpoint: truncated " + tag);
  return v;
}

}  // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& ck) {
  out << "owcsim-checkpoint v1\n";
  out << "scheme " << to_string(ck.scheme) << '\n';
  out << "users " << ck.users << '\n';
  out << "leds " << ck.leds << '\n';
  out << "n_active " << ck.n_active << '\n';
  out << "state_dim " << ck.actor.state_dim() << '\n';
  out << "cont_dim " << ck.actor.cont_dim() << '\n';
  out << "logit_dim " << ck.actor.logit_dim() << '\n';
  const auto& hp = ck.hp;
  out << "hp " << format_double(hp.clip_eps) << ' ' << format_double(hp.discount)
      << ' ' << format_double(hp.actor_lr) << ' ' << format_double(hp.critic_lr)
      << ' ' << hp.minibatch << ' ' << hp.episodes << ' ' << hp.steps << ' '
      << hp.hidden << ' ' << format_double(hp.log_std_init) << ' '
      << format_double(hp.log_std_min) << ' ' << format_double(hp.log_std_max)
      << ' ' << (hp.use_gae ? 1 : 0) << ' ' << format_double(hp.gae_lambda)
      << ' ' << format_double(hp.entropy_coef) << '\n';
  write_vector(out, "actor_net", ck.actor.net.params);
  write_vector(out, "actor_log_std", ck.actor.log_std_raw);
  write_vector(out, "critic_net", ck.critic.net.params);
  out << "norm_count " << format_double(ck.normalizer.count()) << '\n';
  write_vector(out, "norm_mean", ck.normalizer.mean());
  write_vector(out, "norm_m2", ck.normalizer.m2());
  out << "end\n";
}

Checkpoint load_checkpoint(std::istream& in) {
  std::string magic, version;
  in >> magic >> version;
  if (magic != "owcsim-checkpoint" || version != "v1")
    throw std::runtime_error("not an owcsim checkpoint");

  auto expect = [&](const char* tag) {
    std::string got;
    in >> got;
    if (got != tag)
      throw std::runtime_error(std::string("checkpoint: expected ") + tag);
  };

  std::string scheme_str;
  expect("scheme");
  in >> scheme_str;
  std::size_t users = 0, leds = 0;
  int n_active = 0, state_dim = 0, cont_dim = 0, logit_dim = 0;
  expect("users");
  in >> users;
  expect("leds");
  in >> leds;
  expect("n_active");
  in >> n_active;
  expect("state_dim");
  in >> state_dim;
  expect("cont_dim");
  in >> cont_dim;
  expect("logit_dim");
  in >> logit_dim;

  PpoHyperparams hp;
  expect("hp");
  std::string tok;
  in >> tok; hp.clip_eps = parse_double(tok);
  in >> tok; hp.discount = parse_double(tok);
  in >> tok; hp.actor_lr = parse_double(tok);
  in >> tok; hp.critic_lr = parse_double(tok);
  in >> hp.minibatch >> hp.episodes >> hp.steps >> hp.hidden;
  in >> tok; hp.log_std_init = parse_double(tok);
  in >> tok; hp.log_std_min = parse_double(tok);
  in >> tok; hp.log_std_max = parse_double(tok);
  int use_gae = 0;
  in >> use_gae;
  hp.use_gae = use_gae != 0;
  in >> tok; hp.gae_lambda = parse_double(tok);
  in >> tok; hp.entropy_coef = parse_double(tok);
  if (!in) throw std::runtime_error("checkpoint: truncated header");

  Actor actor(state_dim, cont_dim, logit_dim, hp);
  auto net = read_vector(in, "actor_net");
  if (net.size() != actor.net.params.size())
    throw std::runtime_error("checkpoint: actor size mismatch");
  actor.net.params = std::move(net);
  auto ls = read_vector(in, "actor_log_std");
  if (ls.size() != actor.log_std_raw.size())
    throw std::runtime_error("checkpoint: log_std size mismatch");
  actor.log_std_raw = std::move(ls);

  Critic critic(state_dim, hp);
  auto cnet = read_vector(in, "critic_net");
  if (cnet.size() != critic.net.params.size())
    throw std::runtime_error("checkpoint: critic size mismatch");
  critic.net.params = std::move(cnet);

  expect("norm_count");
  in >> tok;
  const double count = parse_double(tok);
  auto mean = read_vector(in, "norm_mean");
  auto m2 = read_vector(in, "norm_m2");
  RunningNormalizer norm(mean.size());
  norm.restore(count, std::move(mean), std::move(m2));

  expect("end");
  return Checkpoint{scheme_str == "noma" ? Scheme::Noma : Scheme::Rsma,
                    users,
                    leds,
                    n_active,
                    hp,
                    std::move(actor),
                    std::move(critic),
                    std::move(norm)};
}

}  // namespace owc
