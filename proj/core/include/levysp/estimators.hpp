#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "levysp/innovations.hpp"
#include "levysp/pdf_engine.hpp"
#include "levysp/sampler.hpp"

namespace levysp {

enum class Method { Lmmse, Tv, Log, Map, Mmse };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
/// Methods whose regularization weight is tuned (lmmse, tv, log).
bool is_variational(Method method) noexcept;

/// Shared grid for message passing. The half-width is sized from the data
/// unless given; num_points doubles (up to max_points) until the step is at
/// most half the noise std. dev.
struct BpGridOptions {
  std::size_t num_points = 4096;
  std::optional<double> half_width;
  std::size_t max_points = std::size_t{1} << 15;
  bool keep_marginals = false;
};

struct MmOptions {
  std::size_t max_iter = 500;
  double tol = 1e-9;  ///< relative cost decrease that counts as converged
};

struct EstimatorConfig {
  Method method = Method::Mmse;
  double reg_weight = 1.0;  ///< lambda (lmmse, tv, log)
  double epsilon = 1.0;     ///< Log penalty scale, fixed during minimization
  BpGridOptions grid;       ///< mmse only
  MmOptions mm;
};

struct DenoiseResult {
  /// Fine-grid estimate s_T[0..K]; estimate[0] = 0.
  std::vector<double> estimate;
  std::size_t iterations = 0;
  bool converged = true;
  /// Per-node posterior densities (mmse with keep_marginals).
  std::optional<std::vector<GridPdf>> posterior_marginals;
  /// Cost after initialization and after every accepted MM step.
  std::vector<double> cost_history;
  /// Message-passing grid step (mmse only).
  double grid_step = 0.0;
};

/// sum_obs (s - y)^2 + lambda sum_k (s[k] - s[k-1])^2 with s[0] = 0, solved
/// exactly as a symmetric tridiagonal system. Any stride.
DenoiseResult lmmse_denoise(const Observations& obs, double lambda);

/// sum (s - y)^2 + lambda sum_k |s[k] - s[k-1]| with s[0] = 0; exact
/// dynamic-programming solution. Stride 1.
DenoiseResult tv_denoise(const Observations& obs, double lambda);

/// sum (s - y)^2 + lambda sum_k log(1 + (s[k] - s[k-1])^2 / eps^2), a
/// stationary point by majorize-minimize started from the lmmse solution
/// with weight lambda / eps^2. Stride 1.
DenoiseResult log_denoise(const Observations& obs, double lambda, double epsilon,
                          const MmOptions& options = {});

/// MAP estimate with penalty 2 sigma_n^2 Psi_T. Dispatches to the exact
/// solver for Gaussian (lmmse), variance-gamma at T = 1 (tv) and Cauchy
/// (log); compound Poisson yields the all-zero signal.
DenoiseResult map_denoise(const Observations& obs, const InnovationSpec& spec, double T,
                          const MmOptions& options = {});

/// Posterior mean by forward-backward message passing on the chain.
DenoiseResult mmse_denoise(const Observations& obs, const InnovationSpec& spec, double T,
                           const BpGridOptions& grid = {});

/// Posterior mean between noiseless samples (stride >= 2).
DenoiseResult mmse_interpolate(const Observations& obs, const InnovationSpec& spec, double T,
                               const BpGridOptions& grid = {});

/// Piecewise-linear interpolation of noiseless samples.
DenoiseResult linear_interpolate(const Observations& obs);

/// Sup-norm gap between result.estimate and y + sigma_n^2 grad log p_y(y),
/// where p_y is evaluated by tensor quadrature and differentiated by
/// central differences. Requires m <= 3 and stride 1.
double tweedie_identity_check(const Observations& obs, const InnovationSpec& spec, double T,
                              const DenoiseResult& result);

/// Runs the estimator named by config.method. spec is required for map and mmse.
DenoiseResult denoise(const Observations& obs, const EstimatorConfig& config,
                      const std::optional<InnovationSpec>& spec, double T);

double lmmse_cost(const Observations& obs, std::span<const double> s, double lambda);
double tv_cost(const Observations& obs, std::span<const double> s, double lambda);
double log_cost(const Observations& obs, std::span<const double> s, double lambda, double epsilon);

}  // namespace levysp
