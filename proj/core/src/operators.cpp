#include "levysp/operators.hpp"

#include <cmath>

#include "levysp/errors.hpp"

namespace levysp {

FirTaps discretize(const PoleSet& poles, double T) {
  if (poles.poles.empty()) throw ArgumentError("discretize: empty pole set");
  if (!(T > 0.0)) throw ArgumentError("discretize: period must be positive");
  if (poles.scale == 0.0) throw ArgumentError("discretize: scale must be nonzero");
  for (const auto& r : poles.poles) {
    if (r.real() > 0.0) throw ArgumentError("discretize: poles must satisfy Re r <= 0");
  }

  std::vector<std::complex<double>> acc{1.0};
  for (const auto& r : poles.poles) {
    const std::complex<double> root = std::exp(r * T);
    std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i];
      next[i + 1] -= acc[i] * root;
    }
    acc = std::move(next);
  }

  FirTaps out;
  out.period = T;
  out.taps.reserve(acc.size());
  for (const auto& c : acc) {
    if (std::abs(c.imag()) > 1e-12) {
      throw ArgumentError("discretize: complex poles must come in conjugate pairs");
    }
    out.taps.push_back(poles.scale * c.real());
  }
  return out;
}

std::vector<double> finite_differences(std::span<const double> signal, const FirTaps& taps) {
  const std::size_t n = taps.order();
  if (taps.taps.empty() || signal.size() < taps.taps.size()) {
    throw ArgumentError("finite_differences: signal shorter than the filter");
  }
  std::vector<double> out(signal.size() - n);
  for (std::size_t k = n; k < signal.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) acc += taps.taps[i] * signal[k - i];
    out[k - n] = acc;
  }
  return out;
}

double lspline_first_order(double T, double x) {
  if (!(T > 0.0)) throw ArgumentError("lspline_first_order: period must be positive");
  return (x >= 0.0 && x < T) ? 1.0 : 0.0;
}

}  // namespace levysp
