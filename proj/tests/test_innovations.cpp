#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "levysp/errors.hpp"
#include "levysp/innovations.hpp"

using namespace levysp;

namespace {

std::vector<InnovationSpec> sample_specs() {
  return {InnovationSpec::gaussian(1.3), InnovationSpec::compound_poisson(0.6, 1.0), InnovationSpec::cauchy(0.4),
          InnovationSpec::stable(1.5, 2.0), InnovationSpec::variance_gamma(1.0)};
}

const double kHalfLog2PiE = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

}  // namespace

TEST(LevyExponent, ZeroAtOrigin) {
  for (const auto& s : sample_specs()) EXPECT_EQ(levy_exponent(s, 0.0), 0.0) << s.to_string();
}

TEST(LevyExponent, SymmetricAndNonPositive) {
  for (const auto& s : sample_specs()) {
    for (double w : {0.1, 0.5, 1.0, 3.0, 40.0}) {
      EXPECT_EQ(levy_exponent(s, w), levy_exponent(s, -w));
      EXPECT_LE(levy_exponent(s, w), 0.0);
    }
  }
}

TEST(LevyExponent, KnownValues) {
  EXPECT_DOUBLE_EQ(levy_exponent(InnovationSpec::gaussian(1.0), 1.0), -0.5);
  EXPECT_NEAR(levy_exponent(InnovationSpec::variance_gamma(1.0), 1.0), std::log(0.5), 1e-15);
  EXPECT_NEAR(levy_exponent(InnovationSpec::compound_poisson(0.6, 1.0), 1e3), -0.6, 1e-12);
  EXPECT_DOUBLE_EQ(levy_exponent(InnovationSpec::stable(1.5, 2.0), 4.0), -16.0);
}

TEST(LevyExponent, RejectsNonFinite) {
  EXPECT_THROW(levy_exponent(InnovationSpec::gaussian(1.0), std::numeric_limits<double>::infinity()), ArgumentError);
  EXPECT_THROW(levy_exponent(InnovationSpec::gaussian(1.0), std::nan("")), ArgumentError);
}

TEST(Calibration, Parameters) {
  EXPECT_EQ(calibrated_spec(InnovationKind::Gaussian).as<GaussianLaw>().sigma, 1.0);
  EXPECT_NEAR(calibrated_spec(InnovationKind::VarianceGamma).as<VarianceGammaLaw>().gamma, 1.31549, 1e-5);
  const auto cauchy = calibrated_spec(InnovationKind::SymmetricAlphaStable);
  EXPECT_TRUE(cauchy.is_cauchy());
  EXPECT_NEAR(cauchy.as<StableLaw>().stable_scale, std::sqrt(std::numbers::e / (8.0 * std::numbers::pi)), 1e-15);
  EXPECT_THROW(calibrated_spec(InnovationKind::CompoundPoisson), UnsupportedError);
}

TEST(Calibration, CauchyScaleReproducesPrintedDensity) {
  // The scale-b Cauchy density b / (pi (b^2 + x^2)) must equal
  // sqrt(8e/pi) / (e + 8 pi x^2) pointwise.
  const double b = calibrated_spec(InnovationKind::SymmetricAlphaStable).as<StableLaw>().stable_scale;
  const double e = std::numbers::e, pi = std::numbers::pi;
  for (double x : {0.0, 0.3, 1.0, 5.0}) {
    EXPECT_NEAR(b / (pi * (b * b + x * x)), std::sqrt(8.0 * e / pi) / (e + 8.0 * pi * x * x), 1e-14);
  }
}

TEST(Entropy, CalibratedLawsShareGaussianEntropy) {
  std::vector<double> h;
  for (auto kind : {InnovationKind::Gaussian, InnovationKind::SymmetricAlphaStable, InnovationKind::VarianceGamma}) {
    h.push_back(differential_entropy_T1(calibrated_spec(kind)));
    EXPECT_NEAR(h.back(), kHalfLog2PiE, 1e-3) << to_string(kind);
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = i + 1; j < h.size(); ++j) EXPECT_NEAR(h[i], h[j], 2e-3);
  }
}

TEST(Entropy, ClosedForms) {
  // Laplace with rate g: 1 + log(2 / g); Cauchy with scale b: log(4 pi b).
  EXPECT_NEAR(differential_entropy_T1(InnovationSpec::variance_gamma(2.0)), 1.0, 1e-6);
  EXPECT_NEAR(differential_entropy_T1(InnovationSpec::cauchy(0.7)), std::log(4.0 * std::numbers::pi * 0.7), 1e-6);
  EXPECT_THROW(differential_entropy_T1(InnovationSpec::compound_poisson(1.0, 1.0)), UnsupportedError);
}

TEST(IncrementScale, PerLaw) {
  EXPECT_DOUBLE_EQ(increment_scale(InnovationSpec::gaussian(2.0), 4.0), 4.0);
  EXPECT_NEAR(increment_scale(InnovationSpec::compound_poisson(0.5, 2.0), 2.0), 2.0, 1e-15);
  EXPECT_NEAR(increment_scale(InnovationSpec::stable(0.5, 1.0), 2.0), 4.0, 1e-12);
  EXPECT_NEAR(increment_scale(InnovationSpec::variance_gamma(1.0), 2.0), 2.0, 1e-15);
}

TEST(Spec, Validation) {
  EXPECT_THROW(InnovationSpec::gaussian(0.0), ArgumentError);
  EXPECT_THROW(InnovationSpec::compound_poisson(0.0, 1.0), ArgumentError);
  EXPECT_THROW(InnovationSpec::compound_poisson(1.0, -1.0), ArgumentError);
  EXPECT_THROW(InnovationSpec::stable(2.0, 1.0), ArgumentError);
  EXPECT_THROW(InnovationSpec::stable(0.0, 1.0), ArgumentError);
  EXPECT_THROW(InnovationSpec::cauchy(0.0), ArgumentError);
  EXPECT_THROW(InnovationSpec::variance_gamma(-2.0), ArgumentError);
}

TEST(Spec, TextRoundTrip) {
  for (const auto& s : sample_specs()) EXPECT_EQ(InnovationSpec::parse(s.to_string()), s) << s.to_string();
  const auto c = InnovationSpec::parse("kind=cauchy stable_scale=0.5");
  EXPECT_TRUE(c.is_cauchy());
  EXPECT_EQ(c.as<StableLaw>().stable_scale, 0.5);
}

TEST(Spec, ParseErrorsNameTheKey) {
  auto key_of = [](const char* text) {
    try {
      InnovationSpec::parse(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("none");
  };
  EXPECT_EQ(key_of("kind=gaussian sigma=1 gamma=2"), "gamma");
  EXPECT_EQ(key_of("kind=gaussian sigma=abc"), "sigma");
  EXPECT_EQ(key_of("kind=laplace"), "kind");
  EXPECT_EQ(key_of("kind=gaussian sigma=1 sigma=2"), "sigma");
  EXPECT_EQ(key_of("kind=compound_poisson poisson_rate=1"), "amplitude_sigma");
}
