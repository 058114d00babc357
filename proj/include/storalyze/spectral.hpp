#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "storalyze/timeseries.hpp"

namespace storalyze {

/// One-sided amplitude spectrum of an hourly series.
struct Spectrum {
  /// Cycles per hour, k / J for k = 0 .. J/2.
  std::vector<double> frequencies;
  /// |X(k)| * 2 / J in the interior, |X(k)| / J at DC and Nyquist, so a
  /// sinusoid of amplitude A on an exact bin reads A.
  std::vector<double> amplitudes;
  std::size_t sample_count = 0;
  bool detrended = false;
  /// max |x| of the input before detrending; sets the peak detection floor.
  double input_peak = 0.0;
};

Spectrum fft_spectrum(std::span<const double> x, bool detrend);
Spectrum fft_spectrum(const TimeSeries& s, bool detrend);

struct SpectralPeak {
  std::size_t index;
  double period_hours;
  double amplitude;
};

/// Largest k local maxima of the amplitude spectrum, DC excluded, ties toward
/// the longer period. Peaks below 1e-10 of the input peak are ignored.
std::vector<SpectralPeak> dominant_periods(const Spectrum& sp, std::size_t k);

/// Real Morlet mother wavelet e^(-t^2/2) cos(5t).
double morlet(double t);

inline constexpr double kMorletCenter = 5.0;

/// Fourier pseudo-period (hours) of the Morlet at scale `a`: 2*pi*a / 5.
double pseudo_period(double scale);
double scale_for_period(double period_hours);

/// 64 scales whose pseudo-periods are log-spaced from 6 h to 2190 h.
std::vector<double> default_scales();
std::vector<double> log_spaced_scales(double min_period_hours, double max_period_hours, std::size_t count);

enum class CwtMethod { Auto, Direct, Fft };

struct CwtOptions {
  bool detrend = true;
  CwtMethod method = CwtMethod::Auto;
};

/// |X_w(a, b)| sampled at every hour b for each scale a.
struct Scalogram {
  std::vector<double> scales;
  std::vector<double> periods;
  std::size_t time_count = 0;
  /// Row-major, one row per scale.
  std::vector<double> magnitudes;
  /// Per scale, the first and last b whose wavelet reach (4a either side)
  /// stays inside the data; everything outside lies in the cone of influence.
  /// valid_first > valid_last means the whole row is edge-affected.
  std::vector<std::size_t> valid_first;
  std::vector<std::size_t> valid_last;

  double magnitude(std::size_t scale_index, std::size_t b) const {
    return magnitudes[scale_index * time_count + b];
  }
  std::span<const double> row(std::size_t scale_index) const {
    return {magnitudes.data() + scale_index * time_count, time_count};
  }
  bool in_cone_of_influence(std::size_t scale_index, std::size_t b) const {
    return b < valid_first[scale_index] || b > valid_last[scale_index];
  }
};

/// Discretised continuous wavelet transform at 1 h steps:
///   X(a, b) = a^(-1/2) * sum_t x(t) * psi((t - b) / a)
/// with the wavelet truncated where it falls below 1e-14. Samples outside the
/// record count as zero.
Scalogram cwt_scalogram(std::span<const double> x, std::span<const double> scales, const CwtOptions& opts = {});
Scalogram cwt_scalogram(const TimeSeries& s, std::span<const double> scales, const CwtOptions& opts = {});

/// For each time, the scale index with the largest magnitude.
std::vector<std::size_t> ridge(const Scalogram& sg);

}  // namespace storalyze
