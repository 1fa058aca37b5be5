#include <algorithm>
#include <cmath>

#include "estimator_detail.hpp"
#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"
#include "mm.hpp"

namespace levysp {

DenoiseResult map_denoise(const Observations& obs, const InnovationSpec& spec, double T,
                          const MmOptions& options) {
  obs.validate();
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("map_denoise: T must be positive");
  if (spec.kind() == InnovationKind::CompoundPoisson) {
    DenoiseResult zero;
    zero.estimate.assign(obs.fine_grid_length, 0.0);
    return zero;
  }
  const double var_n = obs.noise_variance;
  if (!(var_n > 0.0)) throw ArgumentError("map_denoise requires a positive noise variance");

  switch (spec.kind()) {
    case InnovationKind::Gaussian: {
      const double sigma = spec.as<GaussianLaw>().sigma;
      return lmmse_denoise(obs, var_n / (sigma * sigma * T));
    }
    case InnovationKind::VarianceGamma:
      if (T == 1.0 && obs.stride == 1) return tv_denoise(obs, 2.0 * var_n * spec.as<VarianceGammaLaw>().gamma);
      break;
    case InnovationKind::SymmetricAlphaStable:
      if (spec.is_cauchy() && obs.stride == 1) {
        return log_denoise(obs, 2.0 * var_n, spec.as<StableLaw>().stable_scale * T, options);
      }
      break;
    case InnovationKind::CompoundPoisson:
      break;
  }

  // General case: majorize-minimize on 2 sigma_n^2 Psi_T.
  const Penalty penalty(spec, T);
  const double scale = increment_scale(spec, T);
  const double floor_d = 1e-8 * scale;
  auto init = lmmse_denoise(obs, var_n / (scale * scale)).estimate;
  return detail::majorize_minimize(
      obs, std::move(init), [&](double d) { return 2.0 * var_n * penalty(d); },
      [&](double d) {
        const double a = std::max(std::abs(d), floor_d);
        return std::max(var_n * penalty.derivative(a) / a, 1e-12);
      },
      options);
}

}  // namespace levysp
