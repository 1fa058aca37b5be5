#pragma once

#include <complex>
#include <span>
#include <vector>

namespace levysp {

/// Poles r_i (Re r_i <= 0, complex ones in conjugate pairs) and gain of a
/// whitening operator with rational frequency response.
struct PoleSet {
  std::vector<std::complex<double>> poles;
  double scale = 1.0;
};

/// Discrete whitening filter d_T[0..n] of a pole set at sampling period T.
struct FirTaps {
  std::vector<double> taps;
  double period = 1.0;

  std::size_t order() const noexcept { return taps.empty() ? 0 : taps.size() - 1; }
};

/// taps = scale * conv_i (1, -exp(r_i T)).
FirTaps discretize(const PoleSet& poles, double T);

/// Generalized finite differences u[k] = sum_i d[i] signal[k - i] for
/// k = n .. len-1; the result has len - n entries.
std::vector<double> finite_differences(std::span<const double> signal, const FirTaps& taps);

/// First-order L-spline: indicator of [0, T).
double lspline_first_order(double T, double x);

}  // namespace levysp
