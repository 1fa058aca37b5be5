#include "mm.hpp"

#include <algorithm>
#include <cmath>

#include "estimator_detail.hpp"
#include "levysp/errors.hpp"

namespace levysp {

namespace detail {

namespace {

double total_cost(const Observations& obs, std::span<const double> s,
                  const std::function<double(double)>& phi) {
  double reg = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) reg += phi(s[k] - s[k - 1]);
  return data_misfit(obs, s) + reg;
}

}  // namespace

DenoiseResult majorize_minimize(const Observations& obs, std::vector<double> init,
                                const std::function<double(double)>& phi,
                                const std::function<double(double)>& weight,
                                const MmOptions& options) {
  const std::size_t K = obs.fine_grid_length - 1;
  DenoiseResult result;
  result.converged = false;
  std::vector<double> s = std::move(init);
  double cost = total_cost(obs, s, phi);
  if (!std::isfinite(cost)) throw NumericalError("majorize-minimize: non-finite initial cost");
  result.cost_history.push_back(cost);

  std::vector<double> edge(K), trial(K + 1);
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    for (std::size_t k = 1; k <= K; ++k) edge[k - 1] = weight(s[k] - s[k - 1]);
    const auto next = solve_weighted_quadratic(obs, edge);
    double step = 1.0, next_cost = total_cost(obs, next, phi);
    trial = next;
    while (!(next_cost <= cost) && step > 1e-6) {
      step *= 0.5;
      for (std::size_t k = 0; k <= K; ++k) trial[k] = s[k] + step * (next[k] - s[k]);
      next_cost = total_cost(obs, trial, phi);
    }
    result.iterations = it + 1;
    if (!(next_cost <= cost)) {
      // No descent along the MM direction: s is stationary to working precision.
      result.converged = true;
      break;
    }
    const double decrease = cost - next_cost;
    s.swap(trial);
    cost = next_cost;
    result.cost_history.push_back(cost);
    if (decrease <= options.tol * std::max(1.0, std::abs(cost))) {
      result.converged = true;
      break;
    }
  }
  result.estimate = std::move(s);
  return result;
}

}  // namespace detail

double log_cost(const Observations& obs, std::span<const double> s, double lambda, double epsilon) {
  double reg = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double d = (s[k] - s[k - 1]) / epsilon;
    reg += std::log1p(d * d);
  }
  return detail::data_misfit(obs, s) + lambda * reg;
}

DenoiseResult log_denoise(const Observations& obs, double lambda, double epsilon,
                          const MmOptions& options) {
  obs.validate();
  detail::require_stride_one(obs, "log_denoise");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("log_denoise: lambda must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ArgumentError("log_denoise: epsilon must be positive");
  }
  auto init = lmmse_denoise(obs, lambda / (epsilon * epsilon)).estimate;
  const double eps2 = epsilon * epsilon;
  return detail::majorize_minimize(
      obs, std::move(init),
      [=](double d) { return lambda * std::log1p(d * d / eps2); },
      [=](double d) { return lambda / (eps2 + d * d); }, options);
}

}  // namespace levysp
