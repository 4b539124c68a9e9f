#ifndef OWC_RATES_HPP
#define OWC_RATES_HPP

#include <cstddef>
#include <vector>

#include "owc/geometry.hpp"

namespace owc {

// RSMA beamformers: one common vector plus one private vector per user.
struct Beamformers {
  std::size_t users = 0;
  std::size_t leds = 0;
  std::vector<double> common;    // N
  std::vector<double> private_;  // K x N row-major, row per user

  Beamformers() = default;
  Beamformers(std::size_t k, std::size_t n)
      : users(k), leds(n), common(n, 0.0), private_(k * n, 0.0) {}

  double private_at(std::size_t user, std::size_t led) const {
    return private_[user * leds + led];
  }
  double& private_at(std::size_t user, std::size_t led) {
    return private_[user * leds + led];
  }
};

// Common-rate adaptation r*: per-user share of the common stream's rate.
struct RateSplit {
  std::vector<double> allocations;  // K nonnegative entries

  double sum() const;
};

struct RateReport {
  std::vector<double> common_rates;   // R_k^(c)
  std::vector<double> private_rates;  // R_k^(p)
  double aggregate = 0.0;
  bool common_decodable = true;
};

// Rate of the common stream at user k: all private streams count as noise.
double common_rate(std::size_t user, const ChannelMatrix& channels,
                   const std::vector<int>& selection,
                   const Beamformers& beams, double noise_var);

// Rate of user k's private stream: other users' private streams as noise.
double private_rate(std::size_t user, const ChannelMatrix& channels,
                    const std::vector<int>& selection,
                    const Beamformers& beams, double noise_var);

// C1: the common stream decodes everywhere iff min_k R_k^(c) >= sum_k r*_k.
bool common_split_feasible(const std::vector<double>& common_rates,
                           const RateSplit& split);

// Aggregate rate as printed: sum_k (r*_k + R_k^(p)).
double aggregate_rate(const RateSplit& split,
                      const std::vector<double>& private_rates);

// Full RSMA report. The aggregate credits the split only when the common
// stream is decodable; otherwise only private rates count. The decode gate
// allows a relative slack so it agrees with the C1 verdict.
RateReport rsma_rates(const ChannelMatrix& channels,
                      const std::vector<int>& selection,
                      const Beamformers& beams, const RateSplit& split,
                      double noise_var, double split_gate_rel_tol = 0.0);

// NOMA baseline: users ordered by descending ||A h_k||^2; each user
// SIC-decodes all weaker-ordered streams before its own, with
// stronger-ordered streams as noise. A stream's rate is the minimum over
// every user that must decode it. Reported in the private_rates slots;
// no common stream.
RateReport noma_rates(const ChannelMatrix& channels,
                      const std::vector<int>& selection,
                      const Beamformers& beams, double noise_var);

}  // namespace owc

#endif
