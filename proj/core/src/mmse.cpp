#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"
#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"

namespace levysp {

namespace {

using detail::Complex;

GridSpec message_grid(const Observations& obs, const InnovationSpec& spec, double T,
                      const BpGridOptions& options) {
  const double sigma_n = std::sqrt(obs.noise_variance);
  const double u_scale = increment_scale(spec, T);
  double half_width = 0.0;
  if (options.half_width) {
    half_width = *options.half_width;
    if (!(half_width > 0.0)) throw ArgumentError("message-passing half-width must be positive");
  } else {
    double max_abs = 0.0, mean = 0.0, sq = 0.0;
    const std::size_t m = obs.count();
    for (std::size_t i = 1; i <= m; ++i) {
      max_abs = std::max(max_abs, std::abs(obs.noisy[i]));
      mean += obs.noisy[i];
      sq += obs.noisy[i] * obs.noisy[i];
    }
    const double std_dev =
        m > 0 ? std::sqrt(std::max(sq / static_cast<double>(m) - (mean / m) * (mean / m), 0.0)) : 0.0;
    const double reach = increment_scale(spec, T * static_cast<double>(obs.stride));
    half_width = std::max({8.0 * std_dev, 1.5 * max_abs, max_abs + 10.0 * sigma_n, max_abs + 8.0 * reach});
  }
  GridSpec grid{half_width, options.num_points};
  grid.validate();
  auto too_coarse = [&] {
    const double dx = grid.step();
    return (sigma_n > 0.0 && dx > 0.5 * sigma_n) || dx > 0.5 * u_scale;
  };
  while (too_coarse() && grid.num_points < options.max_points) grid.num_points *= 2;
  return grid;
}

/// Linear convolution with a fixed symmetric kernel on N points, done as a
/// circular convolution of length 2N.
class KernelConvolver {
 public:
  KernelConvolver(std::span<const double> masses, std::size_t n) : n_(n), kernel_(2 * n), buf_(2 * n) {
    const std::size_t h = n - 1;
    for (std::size_t d = 0; d <= h; ++d) {
      kernel_[d] = masses[h + d];
      if (d > 0) kernel_[2 * n - d] = masses[h - d];
    }
    detail::fft_inplace(kernel_, -1);
  }

  /// out = in * kernel restricted to the grid; returns sum(out).
  double apply(std::span<const double> in, std::span<double> out) {
    std::fill(buf_.begin(), buf_.end(), Complex{});
    for (std::size_t i = 0; i < n_; ++i) buf_[i] = in[i];
    detail::fft_inplace(buf_, -1);
    for (std::size_t i = 0; i < buf_.size(); ++i) buf_[i] *= kernel_[i];
    detail::fft_inplace(buf_, +1);
    const double scale = 1.0 / static_cast<double>(buf_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      out[i] = std::max(buf_[i].real() * scale, 0.0);
      total += out[i];
    }
    return total;
  }

 private:
  std::size_t n_;
  std::vector<Complex> kernel_, buf_;
};

void normalize(std::span<double> v, const char* what) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalError(std::string("message passing: ") + what + " vanished on the grid");
  }
  for (double& x : v) x /= total;
}

DenoiseResult message_passing(const Observations& obs, const InnovationSpec& spec, double T,
                              const BpGridOptions& options) {
  obs.validate();
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("message passing: T must be positive");
  const GridSpec grid = message_grid(obs, spec, T, options);
  const std::size_t n = grid.num_points;
  const std::size_t K = obs.fine_grid_length - 1;
  const double dx = grid.step();
  const bool noiseless = obs.noise_variance == 0.0;

  // likelihood[k] is empty for unobserved nodes.
  std::vector<std::vector<double>> likelihood(K + 1);
  for (std::size_t i = 1; i <= obs.count(); ++i) {
    const double y = obs.noisy[i];
    auto& g = likelihood[i * obs.stride];
    g.assign(n, 0.0);
    if (noiseless) {
      const double pos = std::round(y / dx) + static_cast<double>(grid.center());
      if (pos < 0.0 || pos >= static_cast<double>(n)) {
        throw ResolutionError("message passing: observation outside the grid");
      }
      g[static_cast<std::size_t>(pos)] = 1.0;
    } else {
      const double two_var = 2.0 * obs.noise_variance;
      const double nearest = std::clamp(y, grid.x(0), grid.x(n - 1));
      const double offset = std::remainder(nearest, dx);
      for (std::size_t j = 0; j < n; ++j) {
        const double r = grid.x(j) - y;
        g[j] = std::exp(-(r * r - offset * offset) / two_var);
      }
    }
  }

  const auto masses = increment_cell_masses(spec, T, dx, n - 1);
  KernelConvolver conv(masses, n);

  std::vector<std::vector<double>> alpha(K + 1, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) alpha[1][j] = masses[(n - 1) + j - grid.center()];
  normalize(alpha[1], "forward message");
  std::vector<double> tmp(n);
  for (std::size_t k = 2; k <= K; ++k) {
    const auto& g = likelihood[k - 1];
    for (std::size_t j = 0; j < n; ++j) tmp[j] = g.empty() ? alpha[k - 1][j] : alpha[k - 1][j] * g[j];
    normalize(tmp, "forward message");
    conv.apply(tmp, alpha[k]);
    normalize(alpha[k], "forward message");
  }

  DenoiseResult result;
  result.estimate.assign(K + 1, 0.0);
  result.grid_step = dx;
  result.iterations = 1;
  if (options.keep_marginals) result.posterior_marginals.emplace();

  const std::size_t guard = std::max<std::size_t>(n / 64, 1);
  std::vector<double> beta(n, 1.0), marginal(n);
  for (std::size_t k = K; k >= 1; --k) {
    if (k < K) {
      const auto& g = likelihood[k + 1];
      for (std::size_t j = 0; j < n; ++j) tmp[j] = g.empty() ? beta[j] : beta[j] * g[j];
      normalize(tmp, "backward message");
      conv.apply(tmp, beta);
      normalize(beta, "backward message");
    }
    const auto& g = likelihood[k];
    for (std::size_t j = 0; j < n; ++j) marginal[j] = alpha[k][j] * beta[j] * (g.empty() ? 1.0 : g[j]);
    normalize(marginal, "posterior marginal");

    double lower = 0.0, upper = 0.0, mean = 0.0;
    for (std::size_t j = 0; j < guard; ++j) {
      lower += marginal[j];
      upper += marginal[n - 1 - j];
    }
    if (std::max(lower, upper) > 1e-3) {
      throw ResolutionError("message passing: posterior mass reaches the grid edge at node " +
                            std::to_string(k) + "; widen the grid");
    }
    for (std::size_t j = 0; j < n; ++j) mean += grid.x(j) * marginal[j];
    result.estimate[k] = mean;

    if (result.posterior_marginals) {
      GridPdf pdf;
      pdf.x_min = grid.x(0);
      pdf.step = dx;
      pdf.values.resize(n);
      pdf.log_values.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        pdf.values[j] = marginal[j] / dx;
        pdf.log_values[j] = std::log(pdf.values[j]);
      }
      result.posterior_marginals->push_back(std::move(pdf));
    }
  }
  if (result.posterior_marginals) std::reverse(result.posterior_marginals->begin(), result.posterior_marginals->end());

  if (noiseless) {
    for (std::size_t i = 1; i <= obs.count(); ++i) result.estimate[i * obs.stride] = obs.noisy[i];
  }
  return result;
}

}  // namespace

DenoiseResult mmse_denoise(const Observations& obs, const InnovationSpec& spec, double T,
                           const BpGridOptions& grid) {
  return message_passing(obs, spec, T, grid);
}

DenoiseResult mmse_interpolate(const Observations& obs, const InnovationSpec& spec, double T,
                               const BpGridOptions& grid) {
  if (obs.noise_variance != 0.0) throw ArgumentError("mmse_interpolate requires noiseless observations");
  return message_passing(obs, spec, T, grid);
}

}  // namespace levysp
