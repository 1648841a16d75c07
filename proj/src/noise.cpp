#include "quadsim/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "quadsim/errors.hpp"

namespace quadsim {

std::string_view to_string(NoiseColor color) {
  switch (color) {
    case NoiseColor::white: return "white";
    case NoiseColor::pink: return "pink";
    case NoiseColor::brown: return "brown";
    case NoiseColor::blue: return "blue";
    case NoiseColor::purple: return "purple";
  }
  return "unknown";
}

NoiseColor parse_noise_color(std::string_view name) {
  for (NoiseColor c : kAllColors) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown noise color '" + std::string(name) +
                    "' (expected white, pink, brown, blue or purple)");
}

double spectral_exponent(NoiseColor color) {
  switch (color) {
    case NoiseColor::white: return 0.0;
    case NoiseColor::pink: return 1.0;
    case NoiseColor::brown: return 2.0;
    case NoiseColor::blue: return -1.0;
    case NoiseColor::purple: return -2.0;
  }
  return 0.0;
}

double nominal_slope_db(NoiseColor color) { return -10.0 * spectral_exponent(color); }

double NoiseSpec::target_stddev() const {
  return color == NoiseColor::white ? std::sqrt(power / sample_time) : power;
}

void NoiseSpec::validate() const {
  if (!(power >= 0.0) || !std::isfinite(power)) {
    throw ConfigError("noise power must be finite and >= 0");
  }
  if (!(sample_time > 0.0) || !std::isfinite(sample_time)) {
    throw ConfigError("noise sample_time must be finite and > 0");
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GaussianSource::GaussianSource(std::uint64_t seed) : engine_(seed) {}

double GaussianSource::next() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  // u1 in (0, 1], u2 in [0, 1)
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kScale;
  const double u2 = static_cast<double>(engine_() >> 11) * kScale;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::vector<double> power_law_taps(double alpha, std::size_t count) {
  std::vector<double> h(count, 0.0);
  if (count == 0) return h;
  h[0] = 1.0;
  for (std::size_t k = 1; k < count; ++k) {
    h[k] = h[k - 1] * (static_cast<double>(k) - 1.0 + alpha / 2.0) / static_cast<double>(k);
  }
  return h;
}

NoiseStream::NoiseStream(const NoiseSpec& spec) : spec_(spec), source_(spec.seed) {
  spec_.validate();
  const double stddev = spec_.target_stddev();
  if (spec_.color == NoiseColor::white) {
    scale_ = stddev;
    return;
  }
  taps_ = power_law_taps(spectral_exponent(spec_.color), kPowerLawTaps);
  double energy = 0.0;
  for (double h : taps_) energy += h * h;
  scale_ = stddev / std::sqrt(energy);
  // Pre-filled history makes the stream stationary from its first sample.
  history_.resize(taps_.size());
  for (double& w : history_) w = source_.next();
  head_ = history_.size() - 1;
}

double NoiseStream::next_sample() {
  double unit;
  if (taps_.empty()) {
    unit = source_.next();
  } else {
    head_ = (head_ + 1) % history_.size();
    history_[head_] = source_.next();
    unit = 0.0;
    std::size_t idx = head_;
    for (double h : taps_) {
      unit += h * history_[idx];
      idx = (idx == 0 ? history_.size() : idx) - 1;
    }
  }
  current_ = scale_ == 0.0 ? 0.0 : scale_ * unit;
  return current_;
}

HeldNoise::HeldNoise(double sample_time, std::vector<double> samples)
    : sample_time_(sample_time), samples_(std::move(samples)) {
  if (!(sample_time_ > 0.0)) throw DomainError("HeldNoise: sample_time must be > 0");
}

HeldNoise HeldNoise::generate(const NoiseSpec& spec, std::size_t count) {
  NoiseStream stream(spec);
  std::vector<double> samples(count);
  for (double& s : samples) s = stream.next_sample();
  return HeldNoise(spec.sample_time, std::move(samples));
}

std::size_t HeldNoise::index_at(double t) const {
  if (!(t >= 0.0)) throw DomainError("HeldNoise: t must be >= 0");
  // Tolerance keeps exact tick times (0.3 / 0.1 = 2.999...) on the left-closed side.
  const auto k = static_cast<std::size_t>(std::floor(t / sample_time_ + 1e-9));
  if (k >= samples_.size()) {
    throw std::out_of_range("HeldNoise: t = " + std::to_string(t) + " is past the last sample");
  }
  return k;
}

double HeldNoise::value_at(double t) const { return samples_[index_at(t)]; }

}  // namespace quadsim
