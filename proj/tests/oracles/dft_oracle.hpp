#pragma once

// O(J^2) textbook DFT.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

inline std::vector<std::complex<double>> dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      // reduce k*m mod n first so the angle stays small and accurate
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * m) % n) / static_cast<double>(n);
      acc += x[m] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  return out;
}

/// One-sided amplitude of bin k from the full transform.
inline double amplitude(const std::vector<std::complex<double>>& X, std::size_t k) {
  const std::size_t n = X.size();
  const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
  return std::abs(X[k]) * (edge ? 1.0 : 2.0) / static_cast<double>(n);
}

}  // namespace oracle
