#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "levysp/innovations.hpp"

namespace levysp {

/// Noiseless samples s_T[0..K] of a Levy process with s_T[0] = 0.
struct SamplePath {
  std::vector<double> values;
  double period = 1.0;
  std::optional<InnovationSpec> spec;
  std::uint64_t seed = 0;

  std::size_t length() const noexcept { return values.size(); }
};

/// Noisy samples s~[i] = s_T[i * stride] + n[i], i = 0..m. Entry 0 sits on
/// the pinned boundary node and is ignored by every estimator.
struct Observations {
  std::vector<double> noisy;
  double noise_variance = 0.0;
  std::size_t stride = 1;  ///< n_T: fine-grid nodes per observation
  std::size_t fine_grid_length = 1;  ///< m * stride + 1

  std::size_t count() const noexcept { return noisy.empty() ? 0 : noisy.size() - 1; }
  void validate() const;
};

/// I.i.d. period-T increments with characteristic function exp(T f(w)).
/// Node k draws from sub-stream (seed, realization, k).
std::vector<double> sample_increments(const InnovationSpec& spec, double T, std::size_t count,
                                      std::uint64_t seed, std::uint64_t realization = 0);

/// Cumulative sum with s[0] = 0.
SamplePath integrate_increments(std::span<const double> increments);

/// sample_increments followed by integrate_increments, with metadata filled.
SamplePath simulate_path(const InnovationSpec& spec, double T, std::size_t count,
                         std::uint64_t seed, std::uint64_t realization = 0);

/// White Gaussian noise of std. dev. sigma_n added to every stride-th sample.
Observations add_noise(const SamplePath& path, double sigma_n, std::size_t stride,
                       std::uint64_t seed, std::uint64_t realization = 0);

}  // namespace levysp
