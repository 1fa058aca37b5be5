#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "levysp/bench.hpp"
#include "levysp/errors.hpp"

using namespace levysp;

namespace {

ExperimentConfig small_config() {
  std::istringstream in(R"(
# small sweep
innovation = gaussian
sigma = 1
signal_length = 32
realizations = 3
calibration_realizations = 2
noise_variances = 0.1, 1
methods = lmmse, tv, mmse
seed = 5
)");
  return ExperimentConfig::parse(in);
}

std::string key_of(const std::string& text) {
  std::istringstream in("sigma = 1\n" + text);
  try {
    ExperimentConfig::parse(in);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "none";
}

}  // namespace

TEST(Snri, Examples) {
  const std::vector<double> s{0.0, 1.0, 2.0}, noisy{0.0, 1.0, 4.0}, half{0.0, 1.0, 3.0};
  EXPECT_DOUBLE_EQ(snr_improvement(s, noisy, noisy), 0.0);
  EXPECT_EQ(snr_improvement(s, noisy, s), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(snr_improvement(s, noisy, half), 10.0 * std::log10(4.0), 1e-12);
  EXPECT_NEAR(10.0 * std::log10(4.0), 6.0206, 1e-4);
  EXPECT_THROW(snr_improvement(s, s, s), ArgumentError);
  // Index 0 is ignored.
  EXPECT_NEAR(snr_improvement(s, noisy, std::vector<double>{9.0, 1.0, 3.0}), 10.0 * std::log10(4.0), 1e-12);
}

TEST(Config, ParsesAndDefaults) {
  const auto c = small_config();
  EXPECT_EQ(c.spec, InnovationSpec::gaussian(1.0));
  EXPECT_EQ(c.signal_length, 32u);
  EXPECT_EQ(c.noise_variances, (std::vector<double>{0.1, 1.0}));
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::Lmmse, Method::Tv, Method::Mmse}));
  std::istringstream empty("sigma = 1\n");
  const auto d = ExperimentConfig::parse(empty);
  ASSERT_EQ(d.noise_variances.size(), 7u);
  EXPECT_NEAR(d.noise_variances.front(), 1e-2, 1e-15);
  EXPECT_NEAR(d.noise_variances.back(), 10.0, 1e-12);
  EXPECT_EQ(d.realizations, 20u);
  EXPECT_EQ(d.calibration_realizations, 10u);
  EXPECT_EQ(d.signal_length, 256u);
  std::istringstream cal("innovation = cauchy\ncalibrated = true\n");
  EXPECT_EQ(ExperimentConfig::parse(cal).spec, calibrated_spec(InnovationKind::SymmetricAlphaStable));
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_EQ(key_of("bogus = 1"), "bogus");
  EXPECT_EQ(key_of("signal_length = ten"), "signal_length");
  EXPECT_EQ(key_of("signal_length = 8"), "signal_length");
  EXPECT_EQ(key_of("realizations = 1"), "realizations");
  EXPECT_EQ(key_of("noise_variances = 1, 0.1"), "noise_variances");
  EXPECT_EQ(key_of("methods = lmmse, l2"), "methods");
  EXPECT_EQ(key_of("innovation = laplace"), "innovation");
  EXPECT_EQ(key_of("innovation = laplace"), "innovation");
  EXPECT_EQ(key_of("calibrated = true"), "calibrated");
  std::istringstream no_sigma("innovation = gaussian\n");
  try {
    ExperimentConfig::parse(no_sigma);
    ADD_FAILURE();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "sigma");
  }
  EXPECT_EQ(key_of("seed = 1\nseed = 2"), "seed");
  EXPECT_EQ(key_of("sigma = 2"), "sigma");
  EXPECT_EQ(key_of("just text"), "just text");
}

TEST(LambdaSearch, GaussianLmmseNearMapWeight) {
  ExperimentConfig c = small_config();
  c.signal_length = 256;
  c.calibration_realizations = 4;
  for (double var : {0.1, 1.0}) {
    const auto found = oracle_lambda(Method::Lmmse, c, var);
    const double map_weight = var;  // sigma_n^2 / (sigma^2 T)
    EXPECT_GT(found.lambda, map_weight / 3.0);
    EXPECT_LT(found.lambda, map_weight * 3.0);
    EXPECT_FALSE(found.at_boundary);
  }
}

TEST(LambdaSearch, DeterministicAndShrinksWithNoise) {
  const auto c = small_config();
  const auto a = oracle_lambda(Method::Tv, c, 0.1), b = oracle_lambda(Method::Tv, c, 0.1);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_LT(oracle_lambda(Method::Tv, c, 0.01).lambda, oracle_lambda(Method::Tv, c, 0.1).lambda);
  EXPECT_THROW(oracle_lambda(Method::Mmse, c, 0.1), ArgumentError);
}

TEST(Experiment, ShapeAndReproducibility) {
  const auto c = small_config();
  const auto r1 = run_experiment(c), r2 = run_experiment(c);
  ASSERT_EQ(r1.cells.size(), 6u);
  for (std::size_t i = 0; i < r1.cells.size(); ++i) {
    const auto &x = r1.cells[i], &y = r2.cells[i];
    EXPECT_EQ(x.method, y.method);
    EXPECT_EQ(x.mean_snri_db, y.mean_snri_db);
    EXPECT_EQ(x.std_snri_db, y.std_snri_db);
    EXPECT_EQ(std::isnan(x.lambda), std::isnan(y.lambda));
    if (!std::isnan(x.lambda)) EXPECT_EQ(x.lambda, y.lambda);
    EXPECT_EQ(x.samples + x.failures, 3u);
    EXPECT_EQ(std::isnan(x.lambda), !is_variational(x.method));
  }
  std::ostringstream csv, json;
  r1.write_csv(csv);
  r1.write_json(json);
  EXPECT_EQ(csv.str().rfind("method,noise_variance,mean_snri_db,std_snri_db,lambda,failures,runtime_ms\n", 0), 0u);
  EXPECT_NE(json.str().find("\"lambda_averaging\""), std::string::npos);
  EXPECT_NO_THROW(r1.cell(Method::Tv, 1.0));
  EXPECT_THROW(r1.cell(Method::Log, 1.0), ArgumentError);
}

TEST(LambdaSearch, InputErrorsAreNotSwallowed) {
  const auto spec = InnovationSpec::gaussian(1.0);
  const auto path = simulate_path(spec, 1.0, 16, 2);
  EXPECT_THROW(search_lambda(Method::Tv, path, add_noise(path, 0.5, 2, 2), 1.0), ArgumentError);
  EXPECT_NO_THROW(search_lambda(Method::Lmmse, path, add_noise(path, 0.5, 2, 2), 1.0));
}
