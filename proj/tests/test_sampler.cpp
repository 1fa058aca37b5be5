#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "levysp/errors.hpp"
#include "levysp/random.hpp"
#include "levysp/sampler.hpp"

using namespace levysp;

namespace {

double empirical_cf(const std::vector<double>& u, double w) {
  double acc = 0.0;
  for (double x : u) acc += std::cos(w * x);
  return acc / static_cast<double>(u.size());
}

}  // namespace

TEST(CounterRng, DeterministicAndKeyed) {
  CounterRng a(7, 0, 3), b(7, 0, 3), c(7, 0, 4), d(7, 1, 3), e(7, 0, 3, StreamTag::Noise);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  EXPECT_NE(x, e());
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Sampler, CharacteristicFunctions) {
  const std::vector<std::pair<InnovationSpec, double>> cases{
      {InnovationSpec::gaussian(1.0), 1.0},        {InnovationSpec::compound_poisson(0.6, 1.0), 1.0},
      {calibrated_spec(InnovationKind::SymmetricAlphaStable), 1.0}, {calibrated_spec(InnovationKind::VarianceGamma), 1.0},
      {InnovationSpec::variance_gamma(1.0), 0.4},  {InnovationSpec::stable(1.5, 1.0), 2.0},
      {InnovationSpec::stable(0.7, 0.5), 1.0}};
  for (const auto& [spec, T] : cases) {
    const auto u = sample_increments(spec, T, 200000, 42);
    for (double w : {0.5, 1.0, 2.0}) {
      EXPECT_NEAR(empirical_cf(u, w), std::exp(T * levy_exponent(spec, w)), 0.01) << spec.to_string() << " w=" << w;
    }
  }
}

TEST(Sampler, CompoundPoissonZeroFraction) {
  const auto u = sample_increments(InnovationSpec::compound_poisson(0.6, 1.0), 1.5, 200000, 9);
  const double zeros = static_cast<double>(std::count(u.begin(), u.end(), 0.0)) / static_cast<double>(u.size());
  EXPECT_NEAR(zeros, std::exp(-0.9), 0.005);
}

TEST(Sampler, PathsStartAtZeroAndAreReproducible) {
  const auto spec = InnovationSpec::gaussian(1.0);
  const auto a = simulate_path(spec, 1.0, 256, 7), b = simulate_path(spec, 1.0, 256, 7);
  ASSERT_EQ(a.values.size(), 257u);
  EXPECT_EQ(a.values[0], 0.0);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(simulate_path(spec, 1.0, 256, 8).values, a.values);
  EXPECT_NE(simulate_path(spec, 1.0, 256, 7, 1).values, a.values);
  // A longer path shares its prefix: node k's draw depends only on its key.
  const auto longer = simulate_path(spec, 1.0, 300, 7);
  EXPECT_TRUE(std::equal(a.values.begin(), a.values.end(), longer.values.begin()));
}

TEST(Sampler, IntegrateIncrements) {
  const auto p = integrate_increments(std::vector<double>{1.0, -2.0, 0.5});
  EXPECT_EQ(p.values, (std::vector<double>{0.0, 1.0, -1.0, -0.5}));
}

TEST(Noise, StrideAndZeroVariance) {
  const auto path = simulate_path(InnovationSpec::gaussian(1.0), 1.0, 12, 3);
  const auto exact = add_noise(path, 0.0, 3, 3);
  EXPECT_EQ(exact.count(), 4u);
  EXPECT_EQ(exact.fine_grid_length, 13u);
  for (std::size_t i = 0; i <= 4; ++i) EXPECT_EQ(exact.noisy[i], path.values[3 * i]);
  EXPECT_THROW(add_noise(path, 1.0, 5, 3), ArgumentError);
  EXPECT_THROW(add_noise(path, -1.0, 1, 3), ArgumentError);
}

TEST(Noise, CommonRandomNumbersAcrossLevels) {
  // The same realization at two noise levels differs by a pure rescaling.
  const auto path = simulate_path(InnovationSpec::gaussian(1.0), 1.0, 64, 5);
  const auto a = add_noise(path, 0.1, 1, 5, 2), b = add_noise(path, 0.4, 1, 5, 2);
  for (std::size_t i = 1; i <= 64; ++i) EXPECT_NEAR(b.noisy[i] - path.values[i], 4.0 * (a.noisy[i] - path.values[i]), 1e-12);
}

TEST(Noise, MomentsMatchVariance) {
  const auto path = simulate_path(InnovationSpec::gaussian(1.0), 1.0, 100000, 1);
  const auto obs = add_noise(path, 0.5, 1, 1);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 1; i < obs.noisy.size(); ++i) {
    const double n = obs.noisy[i] - path.values[i];
    s += n;
    s2 += n * n;
  }
  const double m = static_cast<double>(obs.count());
  EXPECT_NEAR(s / m, 0.0, 0.01);
  EXPECT_NEAR(s2 / m, 0.25, 0.005);
}
