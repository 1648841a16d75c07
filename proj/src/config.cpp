#include "quadsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "quadsim/errors.hpp"

namespace quadsim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text) {
  double v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

struct Key {
  std::string name;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view)> set;
};

Key number(std::string name, double ExperimentConfig::*field) {
  return {std::move(name), [field](const ExperimentConfig& c) { return format_double(c.*field); },
          [field](ExperimentConfig& c, std::string_view v) { c.*field = parse_number(v); }};
}

// Generic member-of-member accessor.
template <class Outer, class Inner>
Key nested(std::string name, Outer ExperimentConfig::*outer, double Inner::*inner) {
  return {std::move(name),
          [=](const ExperimentConfig& c) { return format_double((c.*outer).*inner); },
          [=](ExperimentConfig& c, std::string_view v) { (c.*outer).*inner = parse_number(v); }};
}

std::string seeds_text(const std::vector<std::uint64_t>& seeds) {
  bool contiguous = seeds.size() > 1;
  for (std::size_t i = 1; i < seeds.size() && contiguous; ++i) {
    contiguous = seeds[i] == seeds[i - 1] + 1;
  }
  if (contiguous) return std::to_string(seeds.front()) + ".." + std::to_string(seeds.back());
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(seeds[i]);
  }
  return out;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    using C = ExperimentConfig;
    std::vector<Key> k;
    k.push_back(nested("quadrotor.mass", &C::quadrotor, &QuadrotorParams::mass));
    k.push_back(nested("quadrotor.gravity", &C::quadrotor, &QuadrotorParams::gravity));
    k.push_back(nested("quadrotor.arm_length", &C::quadrotor, &QuadrotorParams::arm_length));
    k.push_back(nested("quadrotor.thrust_coeff", &C::quadrotor, &QuadrotorParams::thrust_coeff));
    k.push_back(nested("quadrotor.drag_coeff", &C::quadrotor, &QuadrotorParams::drag_coeff));
    k.push_back(nested("quadrotor.Ix", &C::quadrotor, &QuadrotorParams::Ix));
    k.push_back(nested("quadrotor.Iy", &C::quadrotor, &QuadrotorParams::Iy));
    k.push_back(nested("quadrotor.Iz", &C::quadrotor, &QuadrotorParams::Iz));
    k.push_back(nested("quadrotor.rotor_inertia", &C::quadrotor, &QuadrotorParams::rotor_inertia));
    k.push_back(
        nested("quadrotor.max_rotor_speed", &C::quadrotor, &QuadrotorParams::max_rotor_speed));
    k.push_back(nested("quadrotor.max_torque", &C::quadrotor, &QuadrotorParams::max_torque));

    const std::pair<const char*, PidChannelGains PidGains::*> pid_channels[] = {
        {"altitude", &PidGains::altitude},
        {"roll", &PidGains::roll},
        {"pitch", &PidGains::pitch},
        {"yaw", &PidGains::yaw}};
    const std::pair<const char*, double PidChannelGains::*> pid_terms[] = {
        {"kp", &PidChannelGains::kp}, {"ki", &PidChannelGains::ki}, {"kd", &PidChannelGains::kd}};
    for (const auto& [ch, chm] : pid_channels) {
      for (const auto& [term, tm] : pid_terms) {
        k.push_back({std::string("gains.pid.") + ch + "." + term,
                     [=](const C& c) { return format_double(c.pid.*chm.*tm); },
                     [=](C& c, std::string_view v) { c.pid.*chm.*tm = parse_number(v); }});
      }
    }

    k.push_back(nested("gains.lyapunov.kz", &C::lyapunov, &LyapunovGains::kz));
    k.push_back(nested("gains.lyapunov.k1", &C::lyapunov, &LyapunovGains::k1));
    k.push_back(nested("gains.lyapunov.k2", &C::lyapunov, &LyapunovGains::k2));
    k.push_back(nested("gains.lyapunov.k3", &C::lyapunov, &LyapunovGains::k3));

    double BacksteppingGains::*const a[] = {
        &BacksteppingGains::a1, &BacksteppingGains::a2, &BacksteppingGains::a3,
        &BacksteppingGains::a4, &BacksteppingGains::a5, &BacksteppingGains::a6,
        &BacksteppingGains::a7, &BacksteppingGains::a8};
    for (int i = 0; i < 8; ++i) {
      k.push_back(nested("gains.backstepping.a" + std::to_string(i + 1), &C::backstepping, a[i]));
    }

    k.push_back(nested("reference.z", &C::reference, &ReferenceSignal::z));
    k.push_back(nested("reference.phi", &C::reference, &ReferenceSignal::phi));
    k.push_back(nested("reference.theta", &C::reference, &ReferenceSignal::theta));
    k.push_back(nested("reference.psi", &C::reference, &ReferenceSignal::psi));

    const char* state_names[] = {"X",   "Y",     "Z",   "Xd",   "Yd",     "Zd",
                                 "phi", "theta", "psi", "phid", "thetad", "psid"};
    for (std::size_t i = 0; i < kStateSize; ++i) {
      k.push_back({std::string("initial.") + state_names[i],
                   [i](const C& c) { return format_double(c.initial.to_vector()[i]); },
                   [i](C& c, std::string_view v) {
                     StateVector s = c.initial.to_vector();
                     s[i] = parse_number(v);
                     c.initial = RigidBodyState::from_vector(s);
                   }});
    }

    k.push_back({"noise.color", [](const C& c) { return noise_label(c.noise_color); },
                 [](C& c, std::string_view v) { c.noise_color = parse_noise_choice(v); }});
    k.push_back(number("noise.power", &C::noise_power));
    k.push_back({"noise.stddev", [](const C& c) { return format_double(c.colored_stddev()); },
                 [](C& c, std::string_view v) { c.noise_stddev = parse_number(v); }});
    k.push_back(number("noise.sample_time", &C::noise_sample_time));
    k.push_back({"noise.injection", [](const C& c) { return std::string(to_string(c.injection)); },
                 [](C& c, std::string_view v) { c.injection = parse_noise_injection(v); }});

    k.push_back(number("sim.dt", &C::dt));
    k.push_back(number("sim.duration", &C::duration));

    k.push_back(number("metrics.band_pct", &C::band_pct));
    for (NoiseColor color : kAllColors) {
      const auto i = static_cast<std::size_t>(color);
      k.push_back({"metrics.band_pct." + std::string(to_string(color)),
                   [color](const C& c) { return format_double(c.band_for(color)); },
                   [i](C& c, std::string_view v) { c.color_band[i] = parse_number(v); }});
    }

    k.push_back({"run.seeds", [](const C& c) { return seeds_text(c.seeds); },
                 [](C& c, std::string_view v) { c.seeds = parse_seed_list(v); }});
    k.push_back({"run.controller", [](const C& c) { return std::string(to_string(c.controller)); },
                 [](C& c, std::string_view v) { c.controller = parse_controller_kind(v); }});
    k.push_back({"output.dir", [](const C& c) { return c.output_dir; },
                 [](C& c, std::string_view v) { c.output_dir = std::string(v); }});
    return k;
  }();
  return table;
}

}  // namespace

std::vector<std::uint64_t> ExperimentConfig::default_seeds() {
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 1; i <= 20; ++i) s.push_back(i);
  return s;
}

void ExperimentConfig::validate() const {
  quadrotor.validate();
  pid.validate();
  lyapunov.validate();
  backstepping.validate();
  if (!(band_pct > 0.0)) throw ConfigError("metrics.band_pct must be > 0");
  for (NoiseColor c : kAllColors) {
    if (!(band_for(c) > 0.0)) {
      throw ConfigError("metrics.band_pct." + std::string(to_string(c)) + " must be > 0");
    }
  }
  if (!(noise_power >= 0.0)) throw ConfigError("noise.power must be >= 0");
  if (noise_stddev && !(*noise_stddev >= 0.0)) throw ConfigError("noise.stddev must be >= 0");
  if (seeds.empty()) throw ConfigError("run.seeds must not be empty");
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
  // Scenario checks cover dt, duration, reference, initial state and noise.
  for (ControllerKind kind :
       {ControllerKind::pid, ControllerKind::lyapunov, ControllerKind::backstepping}) {
    scenario(kind, noise_color.value_or(NoiseColor::white), seeds.front()).validate();
  }
}

ControllerGains ExperimentConfig::gains(ControllerKind kind) const {
  switch (kind) {
    case ControllerKind::pid: return pid;
    case ControllerKind::lyapunov: return lyapunov;
    case ControllerKind::backstepping: return backstepping;
  }
  return backstepping;
}

double ExperimentConfig::colored_stddev() const {
  if (noise_stddev) return *noise_stddev;
  return std::sqrt(noise_power / noise_sample_time);
}

std::optional<NoiseSpec> ExperimentConfig::noise_spec(std::optional<NoiseColor> color) const {
  if (!color) return std::nullopt;
  NoiseSpec spec;
  spec.color = *color;
  spec.power = *color == NoiseColor::white ? noise_power : colored_stddev();
  spec.sample_time = noise_sample_time;
  return spec;
}

double ExperimentConfig::band_for(std::optional<NoiseColor> color) const {
  if (!color) return band_pct;
  return color_band[static_cast<std::size_t>(*color)].value_or(band_pct);
}

void ExperimentConfig::set_band_all(double pct) {
  band_pct = pct;
  for (auto& b : color_band) b = pct;
}

Scenario ExperimentConfig::scenario(ControllerKind kind, std::optional<NoiseColor> color,
                                    std::uint64_t seed) const {
  Scenario sc;
  sc.controller = gains(kind);
  sc.reference = reference;
  sc.noise = noise_spec(color);
  sc.injection = injection;
  sc.duration = duration;
  sc.dt = dt;
  sc.initial = initial;
  sc.seed = seed;
  return sc;
}

std::string ExperimentConfig::resolved() const {
  std::string out;
  for (const auto& k : keys()) out += k.name + " = " + k.get(*this) + "\n";
  return out;
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  ExperimentConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Key& k) { return k.name == key; });
    if (it == table.end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
    }
    try {
      it->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + std::string(key) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  text = trim(text);
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_unsigned(trim(text.substr(0, dots)));
    const auto hi = parse_unsigned(trim(text.substr(dots + 2)));
    if (hi < lo) throw ConfigError("seed range '" + std::string(text) + "' is empty");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    seeds.push_back(parse_unsigned(trim(text.substr(pos, comma - pos))));
    pos = comma + 1;
  }
  return seeds;
}

std::optional<NoiseColor> parse_noise_choice(std::string_view text) {
  if (text == "none") return std::nullopt;
  return parse_noise_color(text);
}

std::string noise_label(std::optional<NoiseColor> color) {
  return color ? std::string(to_string(*color)) : "none";
}

}  // namespace quadsim
