#include <cmath>

#include "estimator_detail.hpp"
#include "levysp/errors.hpp"

namespace levysp::detail {

std::vector<double> solve_tridiagonal(std::span<const double> diag, std::span<const double> off,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n), x(n);
  if (n == 0) return x;
  double denom = diag[0];
  if (!(denom > 0.0)) throw NumericalError("tridiagonal solve: matrix not positive definite");
  c[0] = n > 1 ? off[0] / denom : 0.0;
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - off[i - 1] * c[i - 1];
    if (!(denom > 0.0)) throw NumericalError("tridiagonal solve: matrix not positive definite");
    c[i] = i + 1 < n ? off[i] / denom : 0.0;
    d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

std::vector<double> solve_weighted_quadratic(const Observations& obs, std::span<const double> edge,
                                             double* relative_residual) {
  const std::size_t K = obs.fine_grid_length - 1;
  if (edge.size() != K) throw ArgumentError("edge weight count must equal the fine-grid length - 1");
  // Unknowns s[1..K] stored at index k - 1.
  std::vector<double> diag(K, 0.0), off(K > 0 ? K - 1 : 0, 0.0), rhs(K, 0.0);
  for (std::size_t i = 1; i <= obs.count(); ++i) {
    const std::size_t k = i * obs.stride;
    diag[k - 1] += 1.0;
    rhs[k - 1] += obs.noisy[i];
  }
  for (std::size_t k = 1; k <= K; ++k) {
    const double w = edge[k - 1];
    diag[k - 1] += w;
    if (k >= 2) {
      diag[k - 2] += w;
      off[k - 2] = -w;
    }
  }
  const auto x = solve_tridiagonal(diag, off, rhs);

  if (relative_residual != nullptr) {
    double res = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      double ax = diag[i] * x[i];
      if (i > 0) ax += off[i - 1] * x[i - 1];
      if (i + 1 < K) ax += off[i] * x[i + 1];
      res = std::max(res, std::abs(ax - rhs[i]));
      norm = std::max(norm, std::abs(rhs[i]));
    }
    *relative_residual = norm > 0.0 ? res / norm : res;
  }

  std::vector<double> s(K + 1, 0.0);
  for (std::size_t k = 1; k <= K; ++k) s[k] = x[k - 1];
  return s;
}

double data_misfit(const Observations& obs, std::span<const double> s) {
  double acc = 0.0;
  for (std::size_t i = 1; i <= obs.count(); ++i) {
    const double r = s[i * obs.stride] - obs.noisy[i];
    acc += r * r;
  }
  return acc;
}

void require_stride_one(const Observations& obs, const char* who) {
  if (obs.stride != 1) throw ArgumentError(std::string(who) + " requires stride 1 (pure denoising)");
}

}  // namespace levysp::detail
