#ifndef OWC_PPO_HPP
#define OWC_PPO_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "owc/environment.hpp"
#include "owc/rng.hpp"

namespace owc {

struct PpoHyperparams {
  double clip_eps = 0.2;    // epsilon
  double discount = 0.9;    // lambda
  double actor_lr = 3e-4;   // delta_A
  double critic_lr = 1e-3;  // delta_C
  int minibatch = 64;       // Q
  int episodes = 500;       // E
  int steps = 64;           // T, must match the environment episode length
  int hidden = 128;
  double log_std_init = -0.5;
  double log_std_min = -5.0;
  double log_std_max = 2.0;
  bool use_gae = false;  // one-step TD advantage by default
  double gae_lambda = 0.95;
  double entropy_coef = 0.0;

  void validate() const;
};

// Fully connected 2-hidden-layer network with tanh activations and linear
// output, with hand-written reverse-mode backprop. Parameters live in one
// flat vector (W1|b1|W2|b2|W3|b3) so SGD steps and finite-difference
// checks can treat the network as a plain parameter vector.
class Mlp {
 public:
  Mlp(int input_dim, int hidden_dim, int output_dim);

  int input_dim() const { return in_; }
  int hidden_dim() const { return hidden_; }
  int output_dim() const { return out_; }
  int param_count() const { return static_cast<int>(params.size()); }

  void init(Rng& rng);

  struct Workspace {
    std::vector<double> input;
    std::vector<double> act1;  // tanh outputs, layer 1
    std::vector<double> act2;  // tanh outputs, layer 2
    std::vector<double> output;
  };

  void forward(std::span<const double> x, Workspace& ws) const;

  // Accumulates d(grad_out . output)/d(params) into grad (same layout).
  void backward(const Workspace& ws, std::span<const double> grad_out,
                std::span<double> grad) const;

  std::vector<double> params;

 private:
  int in_, hidden_, out_;
};

struct ActorOutput {
  std::vector<double> mean;     // per continuous coordinate
  std::vector<double> log_std;  // clamped
  std::vector<double> logits;   // per LED
};

// Hybrid policy head: Gaussian over the continuous coordinates, Gumbel
// top-N_a over the LED logits. Log-std is a state-independent learned
// parameter vector.
class Actor {
 public:
  Actor(int state_dim, int cont_dim, int logit_dim,
        const PpoHyperparams& hp);

  int state_dim() const { return net.input_dim(); }
  int cont_dim() const { return cont_dim_; }
  int logit_dim() const { return logit_dim_; }
  int param_count() const;

  void init(Rng& rng);

  double get_param(int i) const;
  void set_param(int i, double v);
  void add_scaled(std::span<const double> grad, double scale);

  ActorOutput forward(std::span<const double> state) const;

  // Joint log-probability of (continuous values, ordered LED picks).
  double log_prob(std::span<const double> state,
                  std::span<const double> cont,
                  std::span<const int> order) const;

  // As above; additionally accumulates coef * d(logp)/d(params) into grad.
  double log_prob_with_grad(std::span<const double> state,
                            std::span<const double> cont,
                            std::span<const int> order, double coef,
                            std::span<double> grad) const;

  // Gaussian differential entropy of the continuous head; its log-std
  // gradient is 1 per coordinate (used by the optional entropy bonus).
  double continuous_entropy() const;
  void add_entropy_grad(double coef, std::span<double> grad) const;

  Mlp net;                          // outputs: cont means | logits
  std::vector<double> log_std_raw;  // cont_dim entries

 private:
  double clamped_log_std(int i) const;
  int cont_dim_, logit_dim_;
  double log_std_min_, log_std_max_;
};

class Critic {
 public:
  Critic(int state_dim, const PpoHyperparams& hp);

  int param_count() const { return net.param_count(); }
  void init(Rng& rng);

  double value(std::span<const double> state) const;
  // Accumulates coef * dV/dparams into grad; returns V(state).
  double value_with_grad(std::span<const double> state, double coef,
                         std::span<double> grad) const;

  Mlp net;
};

struct Transition {
  StateVector state;  // normalized, as seen by the policy
  StateVector next_state;
  std::vector<double> cont;
  std::vector<int> order;  // ordered selected LED indices
  double log_prob_old = 0.0;
  double reward = 0.0;
  bool terminal = false;
};

struct PolicySample {
  std::vector<double> cont;
  std::vector<int> order;
  double log_prob = 0.0;
};

// Stochastic draw: Gaussian continuous coordinates plus Gumbel top-k LED
// picks; log_prob sums the Gaussian densities and the sequential-softmax
// terms of the ordered picks.
PolicySample policy_sample(const Actor& actor, std::span<const double> state,
                           int n_active, Rng& rng);

// Mean action and greedy top-k; log_prob reported as 0.
PolicySample greedy_action(const Actor& actor, std::span<const double> state,
                           int n_active);

// Plackett-Luce log-probability of an ordered top-k pick.
double top_k_log_prob(std::span<const double> logits,
                      std::span<const int> order);

// One-step TD advantage r + lambda * V(s') - V(s); terminal transitions
// drop the bootstrap.
double advantage(const Transition& t, const Critic& critic_old,
                 double discount);

double clipped_surrogate(double ratio, double advantage, double clip_eps);

// One mini-batch gradient-ascent step on the clipped surrogate.
// Returns the mean surrogate value. Throws std::runtime_error on a
// non-finite gradient.
double actor_update(Actor& actor, std::span<const Transition> pool,
                    std::span<const int> batch,
                    std::span<const double> advantages,
                    const PpoHyperparams& hp);

// One mini-batch SGD step on the critic MSE against
// R_hat = r + lambda * V_old(s'). Returns the mean loss.
double critic_update(Critic& critic, const Critic& critic_old,
                     std::span<const Transition> pool,
                     std::span<const int> batch, const PpoHyperparams& hp);

// Per-coordinate running mean/variance, committed at episode boundaries so
// every state inside an episode is normalized with the same statistics.
class RunningNormalizer {
 public:
  explicit RunningNormalizer(std::size_t dim = 0);

  std::size_t dim() const { return mean_.size(); }
  void observe(std::span<const double> x);
  void commit();
  void normalize(std::span<const double> x, std::span<double> out) const;
  StateVector normalized(std::span<const double> x) const;

  double count() const { return count_; }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& m2() const { return m2_; }
  void restore(double count, std::vector<double> mean, std::vector<double> m2);

 private:
  double count_ = 0.0;
  std::vector<double> mean_, m2_;
  double pending_count_ = 0.0;
  std::vector<double> pending_mean_, pending_m2_;
};

struct EpisodeLog {
  int episode = 0;
  double mean_reward = 0.0;
  double mean_surrogate = 0.0;
  double mean_critic_loss = 0.0;
  double sat_rate = 0.0;  // mean fraction of satisfied constraints
};

struct TrainResult {
  Actor actor;
  Critic critic;
  RunningNormalizer normalizer;
  std::vector<EpisodeLog> log;
};

// Algorithm: for each episode, roll out T steps under the frozen policy,
// compute advantages with the frozen critic, run Q-sized minibatch updates
// over the episode pool, then refresh the frozen copies.
TrainResult train(Environment& env, const PpoHyperparams& hp,
                  std::uint64_t seed);

// One greedy action taken from the given raw state.
Environment::StepResult greedy_step(Environment& env, const Actor& actor,
                                    const RunningNormalizer& norm,
                                    const StateVector& raw_state);

struct Checkpoint {
  Scheme scheme = Scheme::Rsma;
  std::size_t users = 0, leds = 0;
  int n_active = 1;
  PpoHyperparams hp;
  Actor actor;
  Critic critic;
  RunningNormalizer normalizer;
};

void save_checkpoint(std::ostream& out, const Checkpoint& ck);
Checkpoint load_checkpoint(std::istream& in);

}  // namespace owc

#endif
