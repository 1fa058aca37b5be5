#include <cmath>

#include "estimator_detail.hpp"
#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"

namespace levysp {

double lmmse_cost(const Observations& obs, std::span<const double> s, double lambda) {
  double reg = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double d = s[k] - s[k - 1];
    reg += d * d;
  }
  return detail::data_misfit(obs, s) + lambda * reg;
}

DenoiseResult lmmse_denoise(const Observations& obs, double lambda) {
  obs.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("lmmse_denoise: lambda must be positive");
  }
  const std::vector<double> edge(obs.fine_grid_length - 1, lambda);
  double residual = 0.0;
  DenoiseResult result;
  result.estimate = detail::solve_weighted_quadratic(obs, edge, &residual);
  if (residual > 1e-10) {
    throw NumericalError("lmmse_denoise: normal-equation residual " + std::to_string(residual));
  }
  result.iterations = 1;
  return result;
}

}  // namespace levysp
