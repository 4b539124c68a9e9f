#ifndef OWC_CONFIG_HPP
#define OWC_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "owc/oracle.hpp"
#include "owc/ppo.hpp"
#include "owc/scenario.hpp"

namespace owc {

inline constexpr const char* kCodeVersion = "owcsim-0.1.0";
inline constexpr const char* kConfigHeader = "# owcsim config v1";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleConfig {
  GridSpec grid;
  std::uint64_t random_budget = 100000;
};

struct SweepSpec {
  enum class Parameter { Dimming, Qos, EhMin, Users };

  Parameter parameter = Parameter::Dimming;
  std::vector<double> values;
  Scheme scheme = Scheme::Rsma;
  int replications = 1;
  std::uint64_t seed_base = 1;
  int eval_placements = 100;

  void validate() const;
};

std::string to_string(SweepSpec::Parameter p);

struct FullConfig {
  Scenario scenario;
  PpoHyperparams ppo;
  OracleConfig oracle;
  SweepSpec sweep;
};

FullConfig default_config();

// Canonical emission: fixed section and key order, shortest round-trip
// number formatting. parse(emit(c)) == c.
std::string emit_config(const FullConfig& config);

// Flat "key = value" sections; '#' starts a comment. Unknown sections or
// keys raise ConfigError.
FullConfig parse_config(const std::string& text);

FullConfig load_config_file(const std::string& path);

// FNV-1a of the canonical emission, 16 hex digits.
std::string config_hash(const FullConfig& config);

// Scenario with the swept parameter replaced by `value`.
Scenario apply_sweep_value(const Scenario& base, SweepSpec::Parameter p,
                           double value);

}  // namespace owc

#endif
