#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace quadsim {

enum class NoiseColor { white, pink, brown, blue, purple };

inline constexpr NoiseColor kAllColors[] = {NoiseColor::white, NoiseColor::pink,
                                            NoiseColor::brown, NoiseColor::blue,
                                            NoiseColor::purple};

std::string_view to_string(NoiseColor color);
NoiseColor parse_noise_color(std::string_view name);

/// Spectral exponent: PSD ~ 1/f^alpha.
double spectral_exponent(NoiseColor color);

/// Nominal PSD slope in dB/decade (-10 * alpha).
double nominal_slope_db(NoiseColor color);

/// For white noise `power` is the band-limited spectral power and the
/// sample variance is power / sample_time. For the other colors `power` is
/// the target standard deviation of the stream.
struct NoiseSpec {
  NoiseColor color = NoiseColor::white;
  double power = 0.01;
  double sample_time = 0.1;
  std::uint64_t seed = 0;

  double target_stddev() const;
  void validate() const;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Standard normal source: std::mt19937_64 uniforms through the Box-Muller
/// transform. Every call consumes a fixed number of engine outputs, so the
/// sequence is reproducible bit for bit across platforms.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// FIR taps of the fractional-difference 1/f^alpha filter,
/// h_0 = 1, h_k = h_{k-1} * (k - 1 + alpha/2) / k.
std::vector<double> power_law_taps(double alpha, std::size_t count);

inline constexpr std::size_t kPowerLawTaps = 1024;

/// Seeded sample source for one noise channel. Each call to next_sample
/// advances one sample_time tick.
class NoiseStream {
 public:
  explicit NoiseStream(const NoiseSpec& spec);

  double next_sample();
  double current() const { return current_; }
  const NoiseSpec& spec() const { return spec_; }

 private:
  NoiseSpec spec_;
  GaussianSource source_;
  std::vector<double> taps_;
  std::vector<double> history_;  // circular buffer of unit white inputs
  std::size_t head_ = 0;
  double scale_ = 0.0;
  double current_ = 0.0;
};

/// Zero-order-hold view of a pre-generated sample sequence: sample k is held
/// on [k*sample_time, (k+1)*sample_time).
class HeldNoise {
 public:
  HeldNoise(double sample_time, std::vector<double> samples);

  /// Generates `count` samples from a fresh stream.
  static HeldNoise generate(const NoiseSpec& spec, std::size_t count);

  double value_at(double t) const;
  std::size_t index_at(double t) const;
  double sample_time() const { return sample_time_; }
  const std::vector<double>& samples() const { return samples_; }

 private:
  double sample_time_;
  std::vector<double> samples_;
};

struct Periodogram {
  std::vector<double> frequency;  // Hz
  std::vector<double> power;      // unit^2 / Hz, one-sided
};

inline constexpr std::size_t kWelchSegment = 256;

/// Welch estimate with Hann windows and 50% overlap.
Periodogram welch_psd(std::span<const double> samples, double sample_time,
                      std::size_t segment = kWelchSegment);

/// Least-squares slope of 10*log10(PSD) against log10(f) over [f_lo, f_hi],
/// in dB per decade. Throws BandError for a band with fewer than 8 bins or a
/// signal with no power in the band.
double psd_slope(std::span<const double> samples, double sample_time, double f_lo, double f_hi);

}  // namespace quadsim
