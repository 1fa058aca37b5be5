#include "levysp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "levysp/errors.hpp"

namespace levysp {

namespace {

constexpr std::uint64_t kCalibrationOffset = std::uint64_t{1} << 32;
constexpr double kSearchHalfWidth = 6.0;
constexpr int kGoldenIterations = 40;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a real number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

InnovationKind kind_from_name(const std::string& name) {
  if (name == "gaussian") return InnovationKind::Gaussian;
  if (name == "compound_poisson") return InnovationKind::CompoundPoisson;
  if (name == "cauchy" || name == "stable") return InnovationKind::SymmetricAlphaStable;
  if (name == "variance_gamma") return InnovationKind::VarianceGamma;
  throw ConfigError("innovation", "unknown innovation '" + name + "'");
}

/// Runs fn(i) for i in [0, n) on a small worker pool. Results must be
/// written to per-index slots, so output does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

DenoiseResult run_method(Method method, double lambda, const Observations& obs,
                         const ExperimentConfig& config) {
  EstimatorConfig ec;
  ec.method = method;
  ec.reg_weight = lambda;
  ec.epsilon = config.epsilon;
  ec.grid.num_points = config.grid_points;
  return denoise(obs, ec, config.spec, config.period);
}

double snri_or_floor(Method method, double lambda, const SamplePath& truth, const Observations& obs,
                     double epsilon) {
  try {
    EstimatorConfig ec;
    ec.method = method;
    ec.reg_weight = lambda;
    ec.epsilon = epsilon;
    return snr_improvement(truth, obs, denoise(obs, ec, std::nullopt, truth.period));
  } catch (const NumericalError&) {
    return -std::numeric_limits<double>::infinity();
  } catch (const ResolutionError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

struct GoldenResult {
  double t, value;
};

template <class F>
GoldenResult golden_maximize(F&& f, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < kGoldenIterations; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

}  // namespace

std::vector<double> ExperimentConfig::default_noise_variances() {
  std::vector<double> v(7);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(10.0, -2.0 + 3.0 * static_cast<double>(i) / 6.0);
  return v;
}

void ExperimentConfig::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("period", "must be positive");
  if (signal_length < 16) throw ConfigError("signal_length", "must be at least 16");
  if (realizations < 2) throw ConfigError("realizations", "must be at least 2");
  if (calibration_realizations < 1) throw ConfigError("calibration_realizations", "must be at least 1");
  if (noise_variances.empty()) throw ConfigError("noise_variances", "must not be empty");
  for (std::size_t i = 0; i < noise_variances.size(); ++i) {
    if (!(noise_variances[i] > 0.0) || !std::isfinite(noise_variances[i])) {
      throw ConfigError("noise_variances", "values must be positive");
    }
    if (i > 0 && !(noise_variances[i] > noise_variances[i - 1])) {
      throw ConfigError("noise_variances", "values must be strictly ascending");
    }
  }
  if (methods.empty()) throw ConfigError("methods", "must not be empty");
  if (grid_points < 256 || (grid_points & (grid_points - 1)) != 0) {
    throw ConfigError("grid_points", "must be a power of two >= 256");
  }
  if (!(epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(body, "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(body, "missing key");
    if (value.empty()) throw ConfigError(key, "missing value");
    if (!kv.emplace(key, value).second) throw ConfigError(key, "duplicate key");
  }

  ExperimentConfig c;
  c.noise_variances = default_noise_variances();
  static const char* const kLawKeys[] = {"sigma", "poisson_rate", "amplitude_sigma", "alpha", "stable_scale", "gamma"};
  std::string law_text;
  bool calibrated = false;
  std::string innovation = "gaussian";

  for (const auto& [key, value] : kv) {
    if (key == "innovation") {
      kind_from_name(value);
      innovation = value;
    } else if (key == "calibrated") {
      calibrated = parse_bool(key, value);
    } else if (std::find(std::begin(kLawKeys), std::end(kLawKeys), key) != std::end(kLawKeys)) {
      parse_real(key, value);
      law_text += " " + key + "=" + value;
    } else if (key == "period") {
      c.period = parse_real(key, value);
    } else if (key == "signal_length") {
      c.signal_length = parse_count(key, value);
    } else if (key == "realizations") {
      c.realizations = parse_count(key, value);
    } else if (key == "calibration_realizations") {
      c.calibration_realizations = parse_count(key, value);
    } else if (key == "noise_variances") {
      c.noise_variances.clear();
      for (const auto& item : split_list(value)) c.noise_variances.push_back(parse_real(key, item));
    } else if (key == "methods") {
      c.methods.clear();
      for (const auto& item : split_list(value)) {
        try {
          c.methods.push_back(parse_method(item));
        } catch (const ConfigError&) {
          throw ConfigError(key, "unknown method '" + item + "'");
        }
      }
    } else if (key == "seed") {
      c.seed = parse_count(key, value);
    } else if (key == "grid_points") {
      c.grid_points = parse_count(key, value);
    } else if (key == "epsilon") {
      c.epsilon = parse_real(key, value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  try {
    if (calibrated) {
      if (!law_text.empty()) throw ConfigError("calibrated", "law parameters cannot be combined with calibrated = true");
      c.spec = calibrated_spec(kind_from_name(innovation));
    } else {
      c.spec = InnovationSpec::parse("kind=" + innovation + law_text);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const UnsupportedError& e) {
    throw ConfigError("calibrated", e.what());
  } catch (const ArgumentError& e) {
    throw ConfigError("innovation", e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse(in);
}

const BenchmarkCell& BenchmarkReport::cell(Method method, double noise_variance) const {
  for (const auto& c : cells) {
    if (c.method == method && c.noise_variance == noise_variance) return c;
  }
  throw ArgumentError("benchmark report: no such cell");
}

void BenchmarkReport::write_csv(std::ostream& out) const {
  out << "method,noise_variance,mean_snri_db,std_snri_db,lambda,failures,runtime_ms\n";
  out.precision(10);
  for (const auto& c : cells) {
    out << to_string(c.method) << ',' << c.noise_variance << ',' << c.mean_snri_db << ',' << c.std_snri_db << ',';
    if (!std::isnan(c.lambda)) out << c.lambda;
    out << ',' << c.failures << ',' << c.runtime_ms << '\n';
  }
}

void BenchmarkReport::write_json(std::ostream& out) const {
  nlohmann::json meta;
  meta["version"] = LEVYSP_VERSION;
  meta["innovation"] = config.spec.to_string();
  meta["period"] = config.period;
  meta["signal_length"] = config.signal_length;
  meta["realizations"] = config.realizations;
  meta["calibration_realizations"] = config.calibration_realizations;
  meta["noise_variances"] = config.noise_variances;
  std::vector<std::string> methods;
  for (Method m : config.methods) methods.emplace_back(to_string(m));
  meta["methods"] = methods;
  meta["seed"] = config.seed;
  meta["grid_points"] = config.grid_points;
  meta["epsilon"] = config.epsilon;
  meta["lambda_averaging"] = "geometric mean of per-realization SNR-optimal weights";
  meta["lambda_search"] = {{"scale", "log"},
                           {"center", "2 * noise_variance"},
                           {"half_width", kSearchHalfWidth},
                           {"golden_iterations", kGoldenIterations}};
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& c : cells) {
    if (c.lambda_at_boundary) {
      warnings.push_back({{"method", to_string(c.method)},
                          {"noise_variance", c.noise_variance},
                          {"warning", "lambda search ended on the widened boundary"}});
    }
  }
  meta["warnings"] = warnings;
  out << meta.dump(2) << '\n';
}

double snr_improvement(std::span<const double> truth, std::span<const double> noisy,
                       std::span<const double> estimate) {
  if (truth.size() != noisy.size() || truth.size() != estimate.size()) {
    throw ArgumentError("snr_improvement: length mismatch");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < truth.size(); ++i) {
    num += (noisy[i] - truth[i]) * (noisy[i] - truth[i]);
    den += (estimate[i] - truth[i]) * (estimate[i] - truth[i]);
  }
  if (num == 0.0) throw ArgumentError("snr_improvement: observations equal the signal");
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(num / den);
}

double snr_improvement(const SamplePath& truth, const Observations& obs, const DenoiseResult& result) {
  const std::size_t m = obs.count();
  if (truth.values.size() != obs.fine_grid_length || result.estimate.size() != obs.fine_grid_length) {
    throw ArgumentError("snr_improvement: length mismatch");
  }
  std::vector<double> t(m + 1), e(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    t[i] = truth.values[i * obs.stride];
    e[i] = result.estimate[i * obs.stride];
  }
  return snr_improvement(t, obs.noisy, e);
}

LambdaSearch search_lambda(Method method, const SamplePath& truth, const Observations& obs, double epsilon) {
  if (!is_variational(method)) throw ArgumentError("search_lambda: method has no regularization weight");
  if (!(obs.noise_variance > 0.0)) throw ArgumentError("search_lambda: noise variance must be positive");
  auto f = [&](double t) { return snri_or_floor(method, std::exp(t), truth, obs, epsilon); };
  const double center = std::log(2.0 * obs.noise_variance);
  double a = center - kSearchHalfWidth, b = center + kSearchHalfWidth;
  const double edge = 1e-3 * (b - a);
  GoldenResult best = golden_maximize(f, a, b);
  bool at_boundary = false;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const bool low = best.t - a < edge, high = b - best.t < edge;
    if (!low && !high) break;
    if (attempt == 1) {
      at_boundary = true;
      break;
    }
    if (low) a -= kSearchHalfWidth;
    if (high) b += kSearchHalfWidth;
    best = golden_maximize(f, a, b);
  }
  return {std::exp(best.t), best.value, at_boundary};
}

LambdaSearch oracle_lambda(Method method, const ExperimentConfig& config, double noise_variance) {
  const std::size_t R = config.calibration_realizations;
  std::vector<LambdaSearch> found(R);
  const double sigma_n = std::sqrt(noise_variance);
  parallel_for(R, [&](std::size_t r) {
    const std::uint64_t id = kCalibrationOffset + r;
    const SamplePath path = simulate_path(config.spec, config.period, config.signal_length, config.seed, id);
    const Observations obs = add_noise(path, sigma_n, 1, config.seed, id);
    found[r] = search_lambda(method, path, obs, config.epsilon);
  });
  LambdaSearch out;
  double log_sum = 0.0, snri_sum = 0.0;
  for (const auto& s : found) {
    log_sum += std::log(s.lambda);
    snri_sum += s.snri_db;
    out.at_boundary = out.at_boundary || s.at_boundary;
  }
  out.lambda = std::exp(log_sum / static_cast<double>(R));
  out.snri_db = snri_sum / static_cast<double>(R);
  return out;
}

BenchmarkReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  BenchmarkReport report;
  report.config = config;
  const std::size_t R = config.realizations;

  std::vector<SamplePath> paths(R);
  parallel_for(R, [&](std::size_t r) {
    paths[r] = simulate_path(config.spec, config.period, config.signal_length, config.seed, r);
  });

  for (double var : config.noise_variances) {
    const double sigma_n = std::sqrt(var);
    std::vector<Observations> observations(R);
    for (std::size_t r = 0; r < R; ++r) observations[r] = add_noise(paths[r], sigma_n, 1, config.seed, r);

    for (Method method : config.methods) {
      const auto start = std::chrono::steady_clock::now();
      BenchmarkCell cell;
      cell.method = method;
      cell.noise_variance = var;
      cell.lambda = std::numeric_limits<double>::quiet_NaN();
      if (is_variational(method)) {
        const LambdaSearch cal = oracle_lambda(method, config, var);
        cell.lambda = cal.lambda;
        cell.lambda_at_boundary = cal.at_boundary;
      }
      std::vector<double> snri(R, std::numeric_limits<double>::quiet_NaN());
      parallel_for(R, [&](std::size_t r) {
        try {
          snri[r] = snr_improvement(paths[r], observations[r],
                                    run_method(method, cell.lambda, observations[r], config));
        } catch (const Error&) {
        }
      });
      double sum = 0.0, sq = 0.0;
      for (double v : snri) {
        if (std::isnan(v)) {
          ++cell.failures;
          continue;
        }
        ++cell.samples;
        sum += v;
      }
      if (cell.samples > 0) {
        cell.mean_snri_db = sum / static_cast<double>(cell.samples);
        for (double v : snri) {
          if (!std::isnan(v)) sq += (v - cell.mean_snri_db) * (v - cell.mean_snri_db);
        }
        cell.std_snri_db = cell.samples > 1 ? std::sqrt(sq / static_cast<double>(cell.samples - 1)) : 0.0;
      } else {
        cell.mean_snri_db = std::numeric_limits<double>::quiet_NaN();
      }
      cell.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      report.cells.push_back(cell);
    }
  }
  return report;
}

}  // namespace levysp
