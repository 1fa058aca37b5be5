#include "levysp/sampler.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "levysp/errors.hpp"
#include "levysp/random.hpp"

namespace levysp {

namespace {

double standard_normal(CounterRng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

/// Chambers-Mallows-Stuck draw with characteristic function exp(-|w|^alpha).
double standard_symmetric_stable(double alpha, CounterRng& rng) {
  const double v = std::numbers::pi * (rng.uniform() - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = -std::log(rng.uniform());
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double draw_increment(const InnovationSpec& spec, double T, CounterRng& rng) {
  switch (spec.kind()) {
    case InnovationKind::Gaussian:
      return spec.as<GaussianLaw>().sigma * std::sqrt(T) * standard_normal(rng);
    case InnovationKind::CompoundPoisson: {
      const auto& law = spec.as<CompoundPoissonLaw>();
      std::poisson_distribution<long> jumps(law.poisson_rate * T);
      const long count = jumps(rng);
      double acc = 0.0;
      for (long i = 0; i < count; ++i) acc += law.amplitude_sigma * standard_normal(rng);
      return acc;
    }
    case InnovationKind::SymmetricAlphaStable: {
      const auto& law = spec.as<StableLaw>();
      return std::pow(law.stable_scale * T, 1.0 / law.alpha) *
             standard_symmetric_stable(law.alpha, rng);
    }
    case InnovationKind::VarianceGamma: {
      // Gamma subordination: E exp(jwX) = (1 + w^2 / gamma^2)^(-T).
      const double gamma = spec.as<VarianceGammaLaw>().gamma;
      std::gamma_distribution<double> subordinator(T, 1.0);
      const double g = subordinator(rng);
      return std::sqrt(2.0 * g) / gamma * standard_normal(rng);
    }
  }
  throw UnsupportedError("sample_increments: unsupported innovation");
}

}  // namespace

void Observations::validate() const {
  if (stride == 0) throw ArgumentError("observations: stride must be positive");
  if (!(noise_variance >= 0.0)) throw ArgumentError("observations: noise variance must be >= 0");
  if (noisy.empty()) throw ArgumentError("observations: no samples");
  if (fine_grid_length != count() * stride + 1) {
    throw ArgumentError("observations: fine_grid_length must equal m * stride + 1");
  }
}

std::vector<double> sample_increments(const InnovationSpec& spec, double T, std::size_t count,
                                      std::uint64_t seed, std::uint64_t realization) {
  if (!(T > 0.0)) throw ArgumentError("sample_increments: period must be positive");
  if (count < 1) throw ArgumentError("sample_increments: count must be >= 1");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    CounterRng rng(seed, realization, k, StreamTag::Increments);
    out[k] = draw_increment(spec, T, rng);
  }
  return out;
}

SamplePath integrate_increments(std::span<const double> increments) {
  SamplePath path;
  path.values.resize(increments.size() + 1);
  path.values[0] = 0.0;
  for (std::size_t k = 0; k < increments.size(); ++k) {
    path.values[k + 1] = path.values[k] + increments[k];
  }
  return path;
}

SamplePath simulate_path(const InnovationSpec& spec, double T, std::size_t count,
                         std::uint64_t seed, std::uint64_t realization) {
  SamplePath path = integrate_increments(sample_increments(spec, T, count, seed, realization));
  path.period = T;
  path.spec = spec;
  path.seed = seed;
  return path;
}

Observations add_noise(const SamplePath& path, double sigma_n, std::size_t stride,
                       std::uint64_t seed, std::uint64_t realization) {
  if (!(sigma_n >= 0.0)) throw ArgumentError("add_noise: sigma_n must be >= 0");
  if (stride == 0 || path.values.empty() || (path.values.size() - 1) % stride != 0) {
    throw ArgumentError("add_noise: path length - 1 must be a multiple of the stride");
  }
  Observations obs;
  obs.stride = stride;
  obs.noise_variance = sigma_n * sigma_n;
  obs.fine_grid_length = path.values.size();
  const std::size_t m = (path.values.size() - 1) / stride;
  obs.noisy.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    double noise = 0.0;
    if (sigma_n > 0.0) {
      CounterRng rng(seed, realization, i, StreamTag::Noise);
      noise = sigma_n * standard_normal(rng);
    }
    obs.noisy[i] = path.values[i * stride] + noise;
  }
  return obs;
}

}  // namespace levysp
