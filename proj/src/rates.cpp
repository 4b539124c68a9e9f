#include "owc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace owc {

namespace {

// h_k^T A w over active LEDs only, so inactive weights never leak in.
double effective_dot(const ChannelMatrix& channels,
                     const std::vector<int>& selection, std::size_t user,
                     const double* weights) {
  double acc = 0.0;
  for (std::size_t n = 0; n < channels.leds; ++n)
    if (selection[n]) acc += channels.at(user, n) * weights[n];
  return acc;
}

void check_inputs(const ChannelMatrix& channels,
                  const std::vector<int>& selection, const Beamformers& beams,
                  double noise_var) {
  if (noise_var <= 0.0)
    throw std::invalid_argument("noise variance must be positive");
  if (selection.size() != channels.leds ||
      beams.leds != channels.leds || beams.users != channels.users)
    throw std::invalid_argument("rate computation dimension mismatch");
}

}  // namespace

double RateSplit::sum() const {
  return std::accumulate(allocations.begin(), allocations.end(), 0.0);
}

double common_rate(std::size_t user, const ChannelMatrix& channels,
                   const std::vector<int>& selection, const Beamformers& beams,
                   double noise_var) {
  check_inputs(channels, selection, beams, noise_var);
  const double s = effective_dot(channels, selection, user, beams.common.data());
  double interference = 0.0;
  for (std::size_t j = 0; j < beams.users; ++j) {
    const double v =
        effective_dot(channels, selection, user, &beams.private_[j * beams.leds]);
    interference += v * v;
  }
  return std::log2(1.0 + s * s / (interference + noise_var));
}

double private_rate(std::size_t user, const ChannelMatrix& channels,
                    const std::vector<int>& selection, const Beamformers& beams,
                    double noise_var) {
  check_inputs(channels, selection, beams, noise_var);
  const double s =
      effective_dot(channels, selection, user, &beams.private_[user * beams.leds]);
  double interference = 0.0;
  for (std::size_t j = 0; j < beams.users; ++j) {
    if (j == user) continue;
    const double v =
        effective_dot(channels, selection, user, &beams.private_[j * beams.leds]);
    interference += v * v;
  }
  return std::log2(1.0 + s * s / (interference + noise_var));
}

bool common_split_feasible(const std::vector<double>& common_rates,
                           const RateSplit& split) {
  if (common_rates.empty()) return split.sum() <= 0.0;
  const double min_common =
      *std::min_element(common_rates.begin(), common_rates.end());
  return min_common >= split.sum();
}

double aggregate_rate(const RateSplit& split,
                      const std::vector<double>& private_rates) {
  double acc = 0.0;
  for (std::size_t k = 0; k < private_rates.size(); ++k)
    acc += split.allocations[k] + private_rates[k];
  return acc;
}

RateReport rsma_rates(const ChannelMatrix& channels,
                      const std::vector<int>& selection,
                      const Beamformers& beams, const RateSplit& split,
                      double noise_var, double split_gate_rel_tol) {
  RateReport report;
  report.common_rates.resize(channels.users);
  report.private_rates.resize(channels.users);
  for (std::size_t k = 0; k < channels.users; ++k) {
    report.common_rates[k] = common_rate(k, channels, selection, beams, noise_var);
    report.private_rates[k] = private_rate(k, channels, selection, beams, noise_var);
  }
  const double min_common =
      *std::min_element(report.common_rates.begin(), report.common_rates.end());
  const double split_sum = split.sum();
  report.common_decodable =
      min_common - split_sum >=
      -split_gate_rel_tol * std::max(std::abs(min_common), std::abs(split_sum));
  // The split is credited only while the common stream decodes everywhere.
  report.aggregate = report.common_decodable
                         ? aggregate_rate(split, report.private_rates)
                         : std::accumulate(report.private_rates.begin(),
                                           report.private_rates.end(), 0.0);
  return report;
}

RateReport noma_rates(const ChannelMatrix& channels,
                      const std::vector<int>& selection,
                      const Beamformers& beams, double noise_var) {
  check_inputs(channels, selection, beams, noise_var);
  const std::size_t users = channels.users;

  // Decode order: descending effective channel energy, ties by user index.
  std::vector<std::size_t> order(users);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> energy(users, 0.0);
  for (std::size_t k = 0; k < users; ++k)
    for (std::size_t n = 0; n < channels.leds; ++n)
      if (selection[n]) energy[k] += channels.at(k, n) * channels.at(k, n);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (energy[a] != energy[b]) return energy[a] > energy[b];
    return a < b;
  });

  // gain[i][j]: user at position i receiving the stream of position j.
  std::vector<double> gain(users * users, 0.0);
  for (std::size_t i = 0; i < users; ++i)
    for (std::size_t j = 0; j < users; ++j) {
      const double v = effective_dot(channels, selection, order[i],
                                     &beams.private_[order[j] * beams.leds]);
      gain[i * users + j] = v * v;
    }

  // Position-j stream is decoded by positions i <= j; while it is decoded,
  // only stronger-ordered streams (l < j) remain as interference.
  RateReport report;
  report.common_rates.assign(users, 0.0);
  report.private_rates.assign(users, 0.0);
  for (std::size_t j = 0; j < users; ++j) {
    double rate = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= j; ++i) {
      double interference = 0.0;
      for (std::size_t l = 0; l < j; ++l) interference += gain[i * users + l];
      rate = std::min(rate, std::log2(1.0 + gain[i * users + j] /
                                                (interference + noise_var)));
    }
    report.private_rates[order[j]] = rate;
  }
  report.common_decodable = true;  // no common stream to decode
  report.aggregate = std::accumulate(report.private_rates.begin(),
                                     report.private_rates.end(), 0.0);
  return report;
}

}  // namespace owc
