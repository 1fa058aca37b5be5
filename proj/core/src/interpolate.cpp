#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"

namespace levysp {

DenoiseResult linear_interpolate(const Observations& obs) {
  obs.validate();
  if (obs.noise_variance != 0.0) throw ArgumentError("linear_interpolate requires noiseless observations");
  const std::size_t n = obs.stride;
  DenoiseResult result;
  result.estimate.assign(obs.fine_grid_length, 0.0);
  for (std::size_t l = 0; l < obs.count(); ++l) {
    const double a = l == 0 ? 0.0 : obs.noisy[l];
    const double b = obs.noisy[l + 1];
    for (std::size_t r = 0; r < n; ++r) {
      const double t = static_cast<double>(r) / static_cast<double>(n);
      result.estimate[l * n + r] = (1.0 - t) * a + t * b;
    }
  }
  if (obs.count() > 0) result.estimate.back() = obs.noisy.back();
  result.iterations = 1;
  return result;
}

}  // namespace levysp
