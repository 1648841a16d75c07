#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>

#include "quadsim/errors.hpp"
#include "quadsim/noise.hpp"

namespace quadsim {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

Periodogram welch_psd(std::span<const double> samples, double sample_time, std::size_t segment) {
  if (segment < 8 || segment % 2 != 0) throw DomainError("welch_psd: segment must be even and >= 8");
  if (samples.size() < segment) throw DomainError("welch_psd: fewer samples than one segment");
  if (!(sample_time > 0.0)) throw DomainError("welch_psd: sample_time must be > 0");

  const std::size_t bins = segment / 2 + 1;
  std::vector<double> window(segment);
  double window_energy = 0.0;
  for (std::size_t i = 0; i < segment; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(segment));
    window_energy += window[i] * window[i];
  }

  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(segment));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(bins));
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan(
      fftw_plan_dft_r2c_1d(static_cast<int>(segment), in.get(), out.get(), FFTW_ESTIMATE));

  Periodogram result;
  result.frequency.resize(bins);
  result.power.assign(bins, 0.0);
  const double fs = 1.0 / sample_time;
  for (std::size_t k = 0; k < bins; ++k) {
    result.frequency[k] = static_cast<double>(k) * fs / static_cast<double>(segment);
  }

  const std::size_t step = segment / 2;
  std::size_t count = 0;
  for (std::size_t start = 0; start + segment <= samples.size(); start += step, ++count) {
    double mean = 0.0;
    for (std::size_t i = 0; i < segment; ++i) mean += samples[start + i];
    mean /= static_cast<double>(segment);
    for (std::size_t i = 0; i < segment; ++i) {
      in.get()[i] = (samples[start + i] - mean) * window[i];
    }
    fftw_execute(plan.get());
    for (std::size_t k = 0; k < bins; ++k) {
      const double re = out.get()[k][0], im = out.get()[k][1];
      result.power[k] += re * re + im * im;
    }
  }

  const double norm = 1.0 / (fs * window_energy * static_cast<double>(count));
  for (std::size_t k = 0; k < bins; ++k) {
    const bool edge = (k == 0) || (k == bins - 1);
    result.power[k] *= norm * (edge ? 1.0 : 2.0);
  }
  return result;
}

double psd_slope(std::span<const double> samples, double sample_time, double f_lo, double f_hi) {
  constexpr std::size_t kMinSamples = std::size_t{1} << 14;
  if (samples.size() < kMinSamples) {
    throw DomainError("psd_slope: need at least 16384 samples (got " +
                      std::to_string(samples.size()) + ")");
  }
  if (!(f_lo > 0.0 && f_lo < f_hi && f_hi < 0.5 / sample_time)) {
    throw BandError("psd_slope: require 0 < f_lo < f_hi < Nyquist");
  }
  const Periodogram psd = welch_psd(samples, sample_time);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < psd.frequency.size(); ++k) {
    const double f = psd.frequency[k];
    if (f < f_lo || f > f_hi) continue;
    if (!(psd.power[k] > 0.0)) {
      throw BandError("psd_slope: zero power at " + std::to_string(f) + " Hz (degenerate signal)");
    }
    const double x = std::log10(f);
    const double y = 10.0 * std::log10(psd.power[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 8) {
    throw BandError("psd_slope: band [" + std::to_string(f_lo) + ", " + std::to_string(f_hi) +
                    "] Hz holds only " + std::to_string(n) + " bins (need 8)");
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace quadsim
