#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "levysp/estimators.hpp"
#include "levysp/innovations.hpp"

namespace levysp {

struct ExperimentConfig {
  InnovationSpec spec = InnovationSpec::gaussian(1.0);
  double period = 1.0;
  std::size_t signal_length = 256;  ///< m
  std::size_t realizations = 20;    ///< R, evaluation
  std::size_t calibration_realizations = 10;
  std::vector<double> noise_variances;  ///< ascending
  std::vector<Method> methods{Method::Lmmse, Method::Tv, Method::Log, Method::Mmse};
  std::uint64_t seed = 1;
  std::size_t grid_points = 4096;  ///< mmse message-passing grid
  double epsilon = 1.0;            ///< Log penalty scale

  /// 7 values log-spaced in [1e-2, 10].
  static std::vector<double> default_noise_variances();
  void validate() const;

  /// Flat `key = value` text; '#' starts a comment. Unknown or malformed
  /// keys raise ConfigError naming the key.
  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig load(const std::string& path);
};

struct BenchmarkCell {
  Method method = Method::Mmse;
  double noise_variance = 0.0;
  double mean_snri_db = 0.0;
  double std_snri_db = 0.0;
  double lambda = 0.0;  ///< NaN for methods without a tuned weight
  bool lambda_at_boundary = false;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double runtime_ms = 0.0;
};

struct BenchmarkReport {
  ExperimentConfig config;
  std::vector<BenchmarkCell> cells;  ///< noise-variance major, then method order

  const BenchmarkCell& cell(Method method, double noise_variance) const;
  /// CSV: method,noise_variance,mean_snri_db,std_snri_db,lambda,failures,runtime_ms
  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

/// 10 log10(|s~ - s|^2 / |s^ - s|^2) over indices 1..m of the observation
/// grid; +infinity when the estimate is exact.
double snr_improvement(std::span<const double> truth, std::span<const double> noisy,
                       std::span<const double> estimate);

/// SNR improvement of an estimate on the fine grid against observations at
/// stride obs.stride.
double snr_improvement(const SamplePath& truth, const Observations& obs, const DenoiseResult& result);

struct LambdaSearch {
  double lambda = 0.0;
  double snri_db = 0.0;
  bool at_boundary = false;
};

/// Golden-section search on log lambda around 2 sigma_n^2 maximizing the SNR
/// improvement against the known signal; widened once if the optimum lands
/// on the interval edge.
LambdaSearch search_lambda(Method method, const SamplePath& truth, const Observations& obs, double epsilon = 1.0);

/// Geometric mean of per-realization optimal weights over the calibration
/// realizations of `config` at the given noise variance.
LambdaSearch oracle_lambda(Method method, const ExperimentConfig& config, double noise_variance);

BenchmarkReport run_experiment(const ExperimentConfig& config);

}  // namespace levysp
