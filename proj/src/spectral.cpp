#include "storalyze/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "storalyze/error.hpp"

namespace storalyze {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

Plan make_r2c(int n, double* in, fftw_complex* out) {
  std::lock_guard lock(planner_mutex());
  return Plan(fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE));
}

Plan make_c2r(int n, fftw_complex* in, double* out) {
  std::lock_guard lock(planner_mutex());
  return Plan(fftw_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE));
}

std::vector<double> mean_removed(std::span<const double> x, bool detrend) {
  std::vector<double> out(x.begin(), x.end());
  if (detrend && !out.empty()) {
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
    for (double& v : out) v -= mean;
  }
  return out;
}

// Smallest n >= target whose only prime factors are 2, 3, 5, 7.
std::size_t fft_friendly_size(std::size_t target) {
  for (std::size_t n = std::max<std::size_t>(target, 1);; ++n) {
    std::size_t m = n;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (m % p == 0) m /= p;
    }
    if (m == 1) return n;
  }
}

// The Gaussian envelope is below 1e-14 beyond this many scales.
constexpr double kWaveletCutoff = 8.0;
// Kernels at most this long go through direct convolution under CwtMethod::Auto.
constexpr std::size_t kDirectKernelLimit = 129;

std::vector<double> wavelet_kernel(double scale, std::size_t half_width) {
  std::vector<double> k(half_width + 1);
  const double norm = 1.0 / std::sqrt(scale);
  for (std::size_t j = 0; j <= half_width; ++j) k[j] = norm * morlet(static_cast<double>(j) / scale);
  return k;
}

void convolve_direct(std::span<const double> x, const std::vector<double>& k, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(k.size()) - 1;
  for (std::ptrdiff_t b = 0; b < n; ++b) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, b - w);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, b + w);
    double acc = 0.0;
    for (std::ptrdiff_t t = lo; t <= hi; ++t) acc += x[t] * k[static_cast<std::size_t>(std::abs(t - b))];
    out[b] = std::abs(acc);
  }
}

// Holds the padded input transform so each scale costs one forward and one
// inverse transform of the kernel.
class FftConvolver {
 public:
  FftConvolver(std::span<const double> x, std::size_t max_half_width)
      : n_(fft_friendly_size(x.size() + max_half_width + 1)),
        bins_(n_ / 2 + 1),
        real_(fftw_buffer<double>(n_)),
        spec_(fftw_buffer<fftw_complex>(bins_)),
        x_spec_(bins_),
        forward_(make_r2c(static_cast<int>(n_), real_.get(), spec_.get())),
        inverse_(make_c2r(static_cast<int>(n_), spec_.get(), real_.get())) {
    std::fill(real_.get(), real_.get() + n_, 0.0);
    std::copy(x.begin(), x.end(), real_.get());
    forward_.execute();
    for (std::size_t i = 0; i < bins_; ++i) x_spec_[i] = {spec_[i][0], spec_[i][1]};
  }

  void convolve(const std::vector<double>& k, std::span<double> out) {
    const std::size_t w = k.size() - 1;
    std::fill(real_.get(), real_.get() + n_, 0.0);
    real_[0] = k[0];
    for (std::size_t j = 1; j <= w; ++j) {
      real_[j] = k[j];
      real_[n_ - j] = k[j];
    }
    forward_.execute();
    for (std::size_t i = 0; i < bins_; ++i) {
      const std::complex<double> prod = x_spec_[i] * std::complex<double>(spec_[i][0], spec_[i][1]);
      spec_[i][0] = prod.real();
      spec_[i][1] = prod.imag();
    }
    inverse_.execute();
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (std::size_t b = 0; b < out.size(); ++b) out[b] = std::abs(real_[b] * inv_n);
  }

 private:
  std::size_t n_;
  std::size_t bins_;
  FftwBuffer<double> real_;
  FftwBuffer<fftw_complex> spec_;
  std::vector<std::complex<double>> x_spec_;
  Plan forward_;
  Plan inverse_;
};

}  // namespace

Spectrum fft_spectrum(std::span<const double> x, bool detrend) {
  if (x.size() < 2) throw Error(ErrorCode::TooShort, "spectrum needs at least 2 samples");
  const std::size_t n = x.size();
  const std::size_t bins = n / 2 + 1;

  Spectrum sp;
  sp.sample_count = n;
  sp.detrended = detrend;
  for (double v : x) sp.input_peak = std::max(sp.input_peak, std::abs(v));

  const std::vector<double> centered = mean_removed(x, detrend);
  auto in = fftw_buffer<double>(n);
  auto out = fftw_buffer<fftw_complex>(bins);
  const Plan plan = make_r2c(static_cast<int>(n), in.get(), out.get());
  std::copy(centered.begin(), centered.end(), in.get());
  plan.execute();

  sp.frequencies.resize(bins);
  sp.amplitudes.resize(bins);
  const double jn = static_cast<double>(n);
  for (std::size_t k = 0; k < bins; ++k) {
    sp.frequencies[k] = static_cast<double>(k) / jn;
    const double mag = std::hypot(out[k][0], out[k][1]);
    const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
    sp.amplitudes[k] = mag * (edge ? 1.0 : 2.0) / jn;
  }
  return sp;
}

Spectrum fft_spectrum(const TimeSeries& s, bool detrend) { return fft_spectrum(s.values(), detrend); }

std::vector<SpectralPeak> dominant_periods(const Spectrum& sp, std::size_t k) {
  const auto& a = sp.amplitudes;
  const double floor = 1e-10 * std::max(sp.input_peak, std::numeric_limits<double>::min());
  std::vector<SpectralPeak> peaks;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const bool above_left = i == 1 || a[i] > a[i - 1];
    const bool above_right = i + 1 == a.size() || a[i] >= a[i + 1];
    if (above_left && above_right && a[i] > floor) {
      peaks.push_back({i, 1.0 / sp.frequencies[i], a[i]});
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const SpectralPeak& l, const SpectralPeak& r) {
    return l.amplitude > r.amplitude;  // stable: equal amplitudes keep the lower frequency first
  });
  if (peaks.size() > k) peaks.resize(k);
  return peaks;
}

double morlet(double t) { return std::exp(-0.5 * t * t) * std::cos(kMorletCenter * t); }

double pseudo_period(double scale) { return 2.0 * std::numbers::pi * scale / kMorletCenter; }

double scale_for_period(double period_hours) { return period_hours * kMorletCenter / (2.0 * std::numbers::pi); }

std::vector<double> log_spaced_scales(double min_period_hours, double max_period_hours, std::size_t count) {
  if (!(min_period_hours > 0.0) || !(max_period_hours >= min_period_hours) || count == 0) {
    throw Error(ErrorCode::NonPositiveScale, "scale grid needs 0 < min period <= max period and count >= 1");
  }
  std::vector<double> scales(count);
  const double lo = std::log(min_period_hours);
  const double hi = std::log(max_period_hours);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    scales[i] = scale_for_period(std::exp(lo + f * (hi - lo)));
  }
  return scales;
}

std::vector<double> default_scales() { return log_spaced_scales(6.0, 2190.0, 64); }

Scalogram cwt_scalogram(std::span<const double> x, std::span<const double> scales, const CwtOptions& opts) {
  if (x.size() < 2) throw Error(ErrorCode::TooShort, "wavelet transform needs at least 2 samples");
  for (double a : scales) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::NonPositiveScale, "scales must be positive");
  }
  const std::size_t n = x.size();
  const std::vector<double> signal = mean_removed(x, opts.detrend);

  Scalogram sg;
  sg.scales.assign(scales.begin(), scales.end());
  sg.time_count = n;
  sg.magnitudes.assign(scales.size() * n, 0.0);

  std::vector<std::size_t> half_widths(scales.size());
  std::size_t widest = 0;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    half_widths[s] = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(kWaveletCutoff * scales[s])), n - 1);
    widest = std::max(widest, half_widths[s]);
  }

  auto use_fft = [&](std::size_t s) {
    switch (opts.method) {
      case CwtMethod::Direct: return false;
      case CwtMethod::Fft: return true;
      case CwtMethod::Auto: return 2 * half_widths[s] + 1 > kDirectKernelLimit;
    }
    return false;
  };

  std::unique_ptr<FftConvolver> fft;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const double a = scales[s];
    sg.periods.push_back(pseudo_period(a));
    const auto kernel = wavelet_kernel(a, half_widths[s]);
    std::span<double> out(sg.magnitudes.data() + s * n, n);
    if (use_fft(s)) {
      if (!fft) fft = std::make_unique<FftConvolver>(signal, widest);
      fft->convolve(kernel, out);
    } else {
      convolve_direct(signal, kernel, out);
    }
    const auto reach = static_cast<std::size_t>(std::ceil(4.0 * a));
    if (2 * reach > n - 1) {
      sg.valid_first.push_back(n);
      sg.valid_last.push_back(0);
    } else {
      sg.valid_first.push_back(reach);
      sg.valid_last.push_back(n - 1 - reach);
    }
  }
  return sg;
}

Scalogram cwt_scalogram(const TimeSeries& s, std::span<const double> scales, const CwtOptions& opts) {
  return cwt_scalogram(s.values(), scales, opts);
}

std::vector<std::size_t> ridge(const Scalogram& sg) {
  std::vector<std::size_t> out(sg.time_count, 0);
  for (std::size_t b = 0; b < sg.time_count; ++b) {
    double best = -1.0;
    for (std::size_t s = 0; s < sg.scales.size(); ++s) {
      const double m = sg.magnitude(s, b);
      if (m > best) {
        best = m;
        out[b] = s;
      }
    }
  }
  return out;
}

}  // namespace storalyze
