#include "owc/config.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "owc/text.hpp"

namespace owc {

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep values must be nonempty");
  if (replications < 1)
    throw std::invalid_argument("sweep replications must be >= 1");
  if (eval_placements < 1)
    throw std::invalid_argument("eval_placements must be >= 1");
  for (double v : values) {
    switch (parameter) {
      case Parameter::Dimming:
        if (!(v > 0.0 && v <= 1.0))
          throw std::invalid_argument("dimming sweep values must be in (0, 1]");
        break;
      case Parameter::Users:
        if (v < 1.0 || v != static_cast<double>(static_cast<int>(v)))
          throw std::invalid_argument("user sweep values must be positive integers");
        break;
      case Parameter::Qos:
      case Parameter::EhMin:
        if (!(v >= 0.0))
          throw std::invalid_argument("sweep values must be nonnegative");
        break;
    }
  }
}

std::string to_string(SweepSpec::Parameter p) {
  switch (p) {
    case SweepSpec::Parameter::Dimming: return "dimming";
    case SweepSpec::Parameter::Qos: return "qos";
    case SweepSpec::Parameter::EhMin: return "eh_min";
    default: return "users";
  }
}

FullConfig default_config() {
  FullConfig c;
  c.scenario = default_scenario();
  c.ppo.steps = c.scenario.episode_length;
  c.sweep.values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  return c;
}

namespace {

std::string vec3_str(const Vec3& v) {
  return format_double(v.x) + " " + format_double(v.y) + " " +
         format_double(v.z);
}

Vec3 parse_vec3(std::string_view s) {
  const auto parts = split_ws(s);
  if (parts.size() != 3)
    throw ConfigError("expected three numbers, got '" + std::string(s) + "'");
  return {parse_double(parts[0]), parse_double(parts[1]),
          parse_double(parts[2])};
}

bool parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("expected true/false, got '" + std::string(s) + "'");
}

Scheme parse_scheme(std::string_view s) {
  if (s == "rsma") return Scheme::Rsma;
  if (s == "noma") return Scheme::Noma;
  throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

RewardMode parse_reward_mode(std::string_view s) {
  if (s == "as-paper") return RewardMode::AsPaper;
  if (s == "penalty") return RewardMode::Penalty;
  throw ConfigError("unknown reward mode '" + std::string(s) + "'");
}

PowerTermMode parse_power_mode(std::string_view s) {
  if (s == "as-printed") return PowerTermMode::AsPrinted;
  if (s == "absolute") return PowerTermMode::Absolute;
  if (s == "squared") return PowerTermMode::Squared;
  throw ConfigError("unknown power term mode '" + std::string(s) + "'");
}

SweepSpec::Parameter parse_parameter(std::string_view s) {
  if (s == "dimming") return SweepSpec::Parameter::Dimming;
  if (s == "qos") return SweepSpec::Parameter::Qos;
  if (s == "eh_min") return SweepSpec::Parameter::EhMin;
  if (s == "users") return SweepSpec::Parameter::Users;
  throw ConfigError("unknown sweep parameter '" + std::string(s) + "'");
}

// Section -> ordered key/value pairs, duplicates rejected.
using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections tokenize(const std::string& text) {
  Sections sections;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = trim(line);
    if (const auto hash = v.find('#'); hash != std::string_view::npos)
      v = trim(v.substr(0, hash));
    if (v.empty()) continue;
    if (v.front() == '[') {
      if (v.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": bad section");
      section = std::string(trim(v.substr(1, v.size() - 2)));
      sections[section];
      continue;
    }
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key{trim(v.substr(0, eq))};
    const std::string value{trim(v.substr(eq + 1))};
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside a section");
    if (!sections[section].emplace(key, value).second)
      throw ConfigError("duplicate key '" + key + "' in [" + section + "]");
  }
  return sections;
}

// Pulls keys out of a section; finish() rejects leftovers.
class SectionReader {
 public:
  SectionReader(Sections& all, const std::string& name) : name_(name) {
    auto it = all.find(name);
    if (it != all.end()) map_ = &it->second;
  }

  std::optional<std::string> take(const std::string& key) {
    if (!map_) return std::nullopt;
    auto it = map_->find(key);
    if (it == map_->end()) return std::nullopt;
    std::string value = it->second;
    map_->erase(it);
    return value;
  }

  void finish() {
    if (!map_ || map_->empty()) return;
    throw ConfigError("unknown key '" + map_->begin()->first + "' in [" +
                      name_ + "]");
  }

 private:
  std::string name_;
  std::map<std::string, std::string>* map_ = nullptr;
};

}  // namespace

std::string emit_config(const FullConfig& c) {
  const Scenario& s = c.scenario;
  std::ostringstream out;
  out << kConfigHeader << "\n\n";

  out << "[room]\n";
  out << "extent = " << vec3_str(s.room) << "\n\n";

  out << "[leds]\n";
  out << "count = " << s.leds.size() << "\n";
  for (std::size_t i = 0; i < s.leds.size(); ++i) {
    out << "pos_" << i << " = " << vec3_str(s.leds[i].position) << "\n";
    out << "orient_" << i << " = " << vec3_str(s.leds[i].orientation) << "\n";
  }
  out << "\n[users]\n";
  out << "count = " << s.user_count << "\n";
  out << "min = " << vec3_str(s.user_min) << "\n";
  out << "max = " << vec3_str(s.user_max) << "\n";
  out << "pd_orientation = " << vec3_str(s.pd_orientation) << "\n";

  out << "\n[device]\n";
  out << "fov_semi_angle_deg = " << format_double(s.device.fov_semi_angle_deg) << "\n";
  out << "half_power_semi_angle_deg = "
      << format_double(s.device.half_power_semi_angle_deg) << "\n";
  out << "pd_area_m2 = " << format_double(s.device.pd_area_m2) << "\n";
  out << "refractive_index = " << format_double(s.device.refractive_index) << "\n";

  out << "\n[harvesting]\n";
  out << "fill_factor = " << format_double(s.harvesting.fill_factor) << "\n";
  out << "thermal_voltage_v = " << format_double(s.harvesting.thermal_voltage_v)
      << "\n";
  out << "dark_saturation_a = " << format_double(s.harvesting.dark_saturation_a)
      << "\n";

  out << "\n[power]\n";
  out << "amplifier_factor = " << format_double(s.power.amplifier_factor) << "\n";
  out << "conversion_factor_w_per_a = "
      << format_double(s.power.conversion_factor_w_per_a) << "\n";
  out << "term_mode = " << to_string(s.power_term_mode) << "\n";

  out << "\n[noise]\n";
  out << "variance_w = " << format_double(s.noise_variance_w) << "\n";

  out << "\n[thresholds]\n";
  out << "qos = " << format_double(s.thresholds.qos) << "\n";
  out << "p_max_w = " << format_double(s.thresholds.p_max_w) << "\n";
  out << "p_har_min_w = " << format_double(s.thresholds.p_har_min_w) << "\n";

  out << "\n[dimming]\n";
  out << "target_level = " << format_double(s.dimming.target_level) << "\n";
  out << "current_min_a = " << format_double(s.dimming.current_min_a) << "\n";
  out << "current_max_a = " << format_double(s.dimming.current_max_a) << "\n";

  out << "\n[env]\n";
  out << "scheme = " << to_string(s.scheme) << "\n";
  out << "seed = " << s.seed << "\n";
  out << "episode_length = " << s.episode_length << "\n";
  out << "reward_mode = " << to_string(s.reward_mode) << "\n";
  out << "penalty_weight = " << format_double(s.penalty_weight) << "\n";
  out << "split_max = " << format_double(s.split_max) << "\n";
  out << "constraint_rel_tol = " << format_double(s.constraint_rel_tol) << "\n";
  out << "dimming_rel_tol = " << format_double(s.dimming_rel_tol) << "\n";
  out << "eh_log_active_only = " << (s.eh_log_active_only ? "true" : "false")
      << "\n";
  out << "augment_state_with_channels = "
      << (s.augment_state_with_channels ? "true" : "false") << "\n";

  const PpoHyperparams& p = c.ppo;
  out << "\n[ppo]\n";
  out << "clip_eps = " << format_double(p.clip_eps) << "\n";
  out << "discount = " << format_double(p.discount) << "\n";
  out << "actor_lr = " << format_double(p.actor_lr) << "\n";
  out << "critic_lr = " << format_double(p.critic_lr) << "\n";
  out << "minibatch = " << p.minibatch << "\n";
  out << "episodes = " << p.episodes << "\n";
  out << "hidden = " << p.hidden << "\n";
  out << "log_std_init = " << format_double(p.log_std_init) << "\n";
  out << "log_std_min = " << format_double(p.log_std_min) << "\n";
  out << "log_std_max = " << format_double(p.log_std_max) << "\n";
  out << "use_gae = " << (p.use_gae ? "true" : "false") << "\n";
  out << "gae_lambda = " << format_double(p.gae_lambda) << "\n";
  out << "entropy_coef = " << format_double(p.entropy_coef) << "\n";

  out << "\n[oracle]\n";
  out << "beam_points = " << c.oracle.grid.beam_points << "\n";
  out << "split_points = " << c.oracle.grid.split_points << "\n";
  out << "max_evaluations = " << c.oracle.grid.max_evaluations << "\n";
  out << "random_budget = " << c.oracle.random_budget << "\n";

  const SweepSpec& w = c.sweep;
  out << "\n[sweep]\n";
  out << "parameter = " << to_string(w.parameter) << "\n";
  out << "values =";
  for (double v : w.values) out << ' ' << format_double(v);
  out << "\n";
  out << "scheme = " << to_string(w.scheme) << "\n";
  out << "replications = " << w.replications << "\n";
  out << "seed_base = " << w.seed_base << "\n";
  out << "eval_placements = " << w.eval_placements << "\n";
  return out.str();
}

FullConfig parse_config(const std::string& text) {
  Sections sections = tokenize(text);
  for (const auto& [name, _] : sections) {
    if (name != "room" && name != "leds" && name != "users" &&
        name != "device" && name != "harvesting" && name != "power" &&
        name != "noise" && name != "thresholds" && name != "dimming" &&
        name != "env" && name != "ppo" && name != "oracle" && name != "sweep")
      throw ConfigError("unknown section [" + name + "]");
  }

  FullConfig c = default_config();
  Scenario& s = c.scenario;

  {
    SectionReader r(sections, "room");
    if (auto v = r.take("extent")) s.room = parse_vec3(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "leds");
    if (auto v = r.take("count")) {
      const auto count = parse_int(*v);
      if (count < 1) throw ConfigError("led count must be >= 1");
      s.leds.assign(static_cast<std::size_t>(count), Luminaire{});
      s.dimming.n_leds = static_cast<int>(count);
    }
    for (std::size_t i = 0; i < s.leds.size(); ++i) {
      const std::string pos_key = "pos_" + std::to_string(i);
      const std::string orient_key = "orient_" + std::to_string(i);
      if (auto v = r.take(pos_key)) s.leds[i].position = parse_vec3(*v);
      if (auto v = r.take(orient_key)) s.leds[i].orientation = parse_vec3(*v);
    }
    r.finish();
  }
  {
    SectionReader r(sections, "users");
    if (auto v = r.take("count")) s.user_count = static_cast<int>(parse_int(*v));
    if (auto v = r.take("min")) s.user_min = parse_vec3(*v);
    if (auto v = r.take("max")) s.user_max = parse_vec3(*v);
    if (auto v = r.take("pd_orientation")) s.pd_orientation = parse_vec3(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "device");
    if (auto v = r.take("fov_semi_angle_deg"))
      s.device.fov_semi_angle_deg = parse_double(*v);
    if (auto v = r.take("half_power_semi_angle_deg"))
      s.device.half_power_semi_angle_deg = parse_double(*v);
    if (auto v = r.take("pd_area_m2")) s.device.pd_area_m2 = parse_double(*v);
    if (auto v = r.take("refractive_index"))
      s.device.refractive_index = parse_double(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "harvesting");
    if (auto v = r.take("fill_factor"))
      s.harvesting.fill_factor = parse_double(*v);
    if (auto v = r.take("thermal_voltage_v"))
      s.harvesting.thermal_voltage_v = parse_double(*v);
    if (auto v = r.take("dark_saturation_a"))
      s.harvesting.dark_saturation_a = parse_double(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "power");
    if (auto v = r.take("amplifier_factor"))
      s.power.amplifier_factor = parse_double(*v);
    if (auto v = r.take("conversion_factor_w_per_a"))
      s.power.conversion_factor_w_per_a = parse_double(*v);
    if (auto v = r.take("term_mode")) s.power_term_mode = parse_power_mode(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "noise");
    if (auto v = r.take("variance_w")) s.noise_variance_w = parse_double(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "thresholds");
    if (auto v = r.take("qos")) s.thresholds.qos = parse_double(*v);
    if (auto v = r.take("p_max_w")) s.thresholds.p_max_w = parse_double(*v);
    if (auto v = r.take("p_har_min_w"))
      s.thresholds.p_har_min_w = parse_double(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "dimming");
    if (auto v = r.take("target_level"))
      s.dimming.target_level = parse_double(*v);
    if (auto v = r.take("current_min_a"))
      s.dimming.current_min_a = parse_double(*v);
    if (auto v = r.take("current_max_a"))
      s.dimming.current_max_a = parse_double(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "env");
    if (auto v = r.take("scheme")) s.scheme = parse_scheme(*v);
    if (auto v = r.take("seed")) s.seed = parse_u64(*v);
    if (auto v = r.take("episode_length"))
      s.episode_length = static_cast<int>(parse_int(*v));
    if (auto v = r.take("reward_mode")) s.reward_mode = parse_reward_mode(*v);
    if (auto v = r.take("penalty_weight"))
      s.penalty_weight = parse_double(*v);
    if (auto v = r.take("split_max")) s.split_max = parse_double(*v);
    if (auto v = r.take("constraint_rel_tol"))
      s.constraint_rel_tol = parse_double(*v);
    if (auto v = r.take("dimming_rel_tol"))
      s.dimming_rel_tol = parse_double(*v);
    if (auto v = r.take("eh_log_active_only"))
      s.eh_log_active_only = parse_bool(*v);
    if (auto v = r.take("augment_state_with_channels"))
      s.augment_state_with_channels = parse_bool(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "ppo");
    PpoHyperparams& p = c.ppo;
    if (auto v = r.take("clip_eps")) p.clip_eps = parse_double(*v);
    if (auto v = r.take("discount")) p.discount = parse_double(*v);
    if (auto v = r.take("actor_lr")) p.actor_lr = parse_double(*v);
    if (auto v = r.take("critic_lr")) p.critic_lr = parse_double(*v);
    if (auto v = r.take("minibatch")) p.minibatch = static_cast<int>(parse_int(*v));
    if (auto v = r.take("episodes")) p.episodes = static_cast<int>(parse_int(*v));
    if (auto v = r.take("hidden")) p.hidden = static_cast<int>(parse_int(*v));
    if (auto v = r.take("log_std_init")) p.log_std_init = parse_double(*v);
    if (auto v = r.take("log_std_min")) p.log_std_min = parse_double(*v);
    if (auto v = r.take("log_std_max")) p.log_std_max = parse_double(*v);
    if (auto v = r.take("use_gae")) p.use_gae = parse_bool(*v);
    if (auto v = r.take("gae_lambda")) p.gae_lambda = parse_double(*v);
    if (auto v = r.take("entropy_coef")) p.entropy_coef = parse_double(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "oracle");
    if (auto v = r.take("beam_points"))
      c.oracle.grid.beam_points = static_cast<int>(parse_int(*v));
    if (auto v = r.take("split_points"))
      c.oracle.grid.split_points = static_cast<int>(parse_int(*v));
    if (auto v = r.take("max_evaluations"))
      c.oracle.grid.max_evaluations = parse_u64(*v);
    if (auto v = r.take("random_budget")) c.oracle.random_budget = parse_u64(*v);
    r.finish();
  }
  {
    SectionReader r(sections, "sweep");
    SweepSpec& w = c.sweep;
    if (auto v = r.take("parameter")) w.parameter = parse_parameter(*v);
    if (auto v = r.take("values")) {
      w.values.clear();
      for (auto part : split_ws(*v)) w.values.push_back(parse_double(part));
    }
    if (auto v = r.take("scheme")) w.scheme = parse_scheme(*v);
    if (auto v = r.take("replications"))
      w.replications = static_cast<int>(parse_int(*v));
    if (auto v = r.take("seed_base")) w.seed_base = parse_u64(*v);
    if (auto v = r.take("eval_placements"))
      w.eval_placements = static_cast<int>(parse_int(*v));
    r.finish();
  }

  c.ppo.steps = s.episode_length;
  return c;
}

FullConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_hash(const FullConfig& config) {
  const std::uint64_t h = fnv1a64(emit_config(config));
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) buf[15 - i] = digits[(h >> (4 * i)) & 0xf];
  buf[16] = '\0';
  return std::string(buf);
}

Scenario apply_sweep_value(const Scenario& base, SweepSpec::Parameter p,
                           double value) {
  Scenario s = base;
  switch (p) {
    case SweepSpec::Parameter::Dimming:
      s.dimming.target_level = value;
      break;
    case SweepSpec::Parameter::Qos:
      s.thresholds.qos = value;
      break;
    case SweepSpec::Parameter::EhMin:
      s.thresholds.p_har_min_w = value;
      break;
    case SweepSpec::Parameter::Users:
      s.user_count = static_cast<int>(value);
      break;
  }
  return s;
}

}  // namespace owc
