#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"
#include "levysp/sampler.hpp"
#include "oracles.hpp"

using namespace levysp;

namespace {

Observations make_obs(std::vector<double> y, double noise_var, std::size_t stride = 1) {
  Observations obs;
  obs.noisy.push_back(0.0);
  obs.noisy.insert(obs.noisy.end(), y.begin(), y.end());
  obs.noise_variance = noise_var;
  obs.stride = stride;
  obs.fine_grid_length = y.size() * stride + 1;
  return obs;
}

std::vector<InnovationSpec> four_specs() {
  return {calibrated_spec(InnovationKind::Gaussian), InnovationSpec::compound_poisson(0.6, 1.0),
          calibrated_spec(InnovationKind::SymmetricAlphaStable), calibrated_spec(InnovationKind::VarianceGamma)};
}

}  // namespace

class PosteriorMean : public ::testing::TestWithParam<int> {};

TEST_P(PosteriorMean, MatchesBruteForceQuadrature) {
  const auto spec = four_specs()[GetParam()];
  const std::vector<std::vector<double>> cases{{0.7}, {1.2, -0.4}, {0.3, 1.9, 1.5}};
  for (const auto& y : cases) {
    const double noise_var = 0.25;
    const auto r = mmse_denoise(make_obs(y, noise_var), spec, 1.0);
    const auto ref = oracle::brute_posterior_mean(spec, 1.0, y, noise_var, y.size() == 3 ? 161 : 401);
    for (std::size_t k = 0; k < y.size(); ++k) {
      EXPECT_NEAR(r.estimate[k + 1], ref[k], 5e-3) << to_string(spec.kind()) << " m=" << y.size() << " k=" << k;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(FourLaws, PosteriorMean, ::testing::Range(0, 4));

TEST(MessagePassing, MarginalsNormalizedAndNodeZeroPinned) {
  const auto path = simulate_path(calibrated_spec(InnovationKind::SymmetricAlphaStable), 1.0, 32, 4);
  BpGridOptions grid;
  grid.keep_marginals = true;
  const auto obs = add_noise(path, 0.5, 1, 4);
  const auto r = mmse_denoise(obs, calibrated_spec(InnovationKind::SymmetricAlphaStable), 1.0, grid);
  EXPECT_EQ(r.estimate[0], 0.0);
  ASSERT_TRUE(r.posterior_marginals);
  ASSERT_EQ(r.posterior_marginals->size(), 32u);
  for (const auto& m : *r.posterior_marginals) {
    const double mass = std::accumulate(m.values.begin(), m.values.end(), 0.0) * m.step;
    EXPECT_NEAR(mass, 1.0, 1e-6);
  }
}

TEST(MessagePassing, GaussianMatchesLmmse) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto spec = InnovationSpec::gaussian(1.0);
    const auto path = simulate_path(spec, 1.0, 100, seed);
    const auto obs = add_noise(path, 0.7, 1, seed);
    const auto mmse = mmse_denoise(obs, spec, 1.0);
    const auto lin = lmmse_denoise(obs, 0.49);
    for (std::size_t i = 0; i < lin.estimate.size(); ++i) {
      EXPECT_NEAR(mmse.estimate[i], lin.estimate[i], 2.0 * mmse.grid_step);
    }
  }
}

TEST(MessagePassing, NegationEquivariant) {
  const auto spec = InnovationSpec::compound_poisson(0.6, 1.0);
  const auto obs = add_noise(simulate_path(spec, 1.0, 40, 3), 0.4, 1, 3);
  auto neg = obs;
  for (double& v : neg.noisy) v = -v;
  const auto a = mmse_denoise(obs, spec, 1.0), b = mmse_denoise(neg, spec, 1.0);
  for (std::size_t i = 0; i < a.estimate.size(); ++i) EXPECT_NEAR(a.estimate[i], -b.estimate[i], 2.0 * a.grid_step);
}

TEST(MessagePassing, NarrowGridIsReported) {
  const auto obs = make_obs({3.0, 6.0, 9.0}, 0.25);
  BpGridOptions grid;
  grid.half_width = 8.0;
  EXPECT_THROW(mmse_denoise(obs, InnovationSpec::gaussian(1.0), 1.0, grid), ResolutionError);
}

TEST(Interpolation, MidpointOfTwoSamples) {
  for (const auto& spec : four_specs()) {
    const auto r = mmse_interpolate(make_obs({2.0}, 0.0, 2), spec, 1.0);
    EXPECT_NEAR(r.estimate[1], 1.0, 2.0 * r.grid_step) << to_string(spec.kind());
    EXPECT_EQ(r.estimate[2], 2.0);
  }
}

TEST(Interpolation, MatchesLinearForEveryLaw) {
  for (const auto& spec : four_specs()) {
    for (std::size_t stride : {2u, 4u}) {
      const auto path = simulate_path(spec, 1.0, 12 * stride, 17);
      const auto obs = add_noise(path, 0.0, stride, 17);
      const auto r = mmse_interpolate(obs, spec, 1.0);
      const auto lin = linear_interpolate(obs);
      for (std::size_t i = 0; i < lin.estimate.size(); ++i) {
        EXPECT_NEAR(r.estimate[i], lin.estimate[i], 2.0 * r.grid_step) << to_string(spec.kind()) << " i=" << i;
      }
    }
  }
}

TEST(Interpolation, RequiresNoiselessInput) {
  EXPECT_THROW(mmse_interpolate(make_obs({1.0}, 0.1, 2), InnovationSpec::gaussian(1.0), 1.0), ArgumentError);
}

TEST(Tweedie, GaussianPair) {
  const auto spec = InnovationSpec::gaussian(1.0);
  const auto obs = make_obs({0.8, -0.3}, 0.5);
  EXPECT_LT(tweedie_identity_check(obs, spec, 1.0, mmse_denoise(obs, spec, 1.0)), 1e-3);
}

TEST(Tweedie, VarianceGammaPair) {
  const auto spec = calibrated_spec(InnovationKind::VarianceGamma);
  const auto obs = make_obs({0.9, 1.4}, 0.25);
  EXPECT_LT(tweedie_identity_check(obs, spec, 1.0, mmse_denoise(obs, spec, 1.0)), 5e-3);
}

TEST(Tweedie, NoiselessLimit) {
  const auto spec = InnovationSpec::gaussian(1.0);
  const auto obs = make_obs({0.8}, 1e-6);
  const auto r = mmse_denoise(obs, spec, 1.0);
  EXPECT_NEAR(r.estimate[1], 0.8, 1e-5);
  EXPECT_LT(tweedie_identity_check(obs, spec, 1.0, r), 1e-5);
}

TEST(Tweedie, TooManyNodes) {
  const auto obs = make_obs({0.1, 0.2, 0.3, 0.4}, 0.25);
  DenoiseResult r;
  r.estimate.assign(5, 0.0);
  EXPECT_THROW(tweedie_identity_check(obs, InnovationSpec::gaussian(1.0), 1.0, r), UnsupportedError);
}
