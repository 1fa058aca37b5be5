#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace levysp {

enum class InnovationKind { Gaussian, CompoundPoisson, SymmetricAlphaStable, VarianceGamma };

/// Pure Gaussian innovation, f(w) = -sigma^2 w^2 / 2.
struct GaussianLaw {
  double sigma = 1.0;

  friend bool operator==(const GaussianLaw&, const GaussianLaw&) = default;
};

/// Impulsive Poisson innovation with zero-mean Gaussian jump amplitudes.
struct CompoundPoissonLaw {
  double poisson_rate = 1.0;     ///< jump intensity lambda
  double amplitude_sigma = 1.0;  ///< std. dev. of the amplitude law

  friend bool operator==(const CompoundPoissonLaw&, const CompoundPoissonLaw&) = default;
};

/// Symmetric alpha-stable innovation, f(w) = -c |w|^alpha.
struct StableLaw {
  double alpha = 1.0;
  double stable_scale = 1.0;

  friend bool operator==(const StableLaw&, const StableLaw&) = default;
};

/// Laplace-type innovation with Levy density exp(-gamma |a|) / |a|.
struct VarianceGammaLaw {
  double gamma = 1.0;

  friend bool operator==(const VarianceGammaLaw&, const VarianceGammaLaw&) = default;
};

/// A symmetric admissible innovation law. Only the parameters of the active
/// kind exist, so a spec can never carry stray fields from another law.
class InnovationSpec {
 public:
  using Law = std::variant<GaussianLaw, CompoundPoissonLaw, StableLaw, VarianceGammaLaw>;

  static InnovationSpec gaussian(double sigma);
  static InnovationSpec compound_poisson(double poisson_rate, double amplitude_sigma);
  static InnovationSpec stable(double alpha, double stable_scale);
  static InnovationSpec cauchy(double stable_scale) { return stable(1.0, stable_scale); }
  static InnovationSpec variance_gamma(double gamma);

  InnovationKind kind() const noexcept;
  const Law& law() const noexcept { return law_; }

  template <class T>
  const T& as() const {
    return std::get<T>(law_);
  }

  bool is_cauchy() const noexcept;

  /// Flat key=value form, e.g. "kind=cauchy stable_scale=0.328872".
  std::string to_string() const;
  static InnovationSpec parse(std::string_view text);

  friend bool operator==(const InnovationSpec&, const InnovationSpec&) = default;

 private:
  explicit InnovationSpec(Law law) : law_(law) {}
  Law law_;
};

std::string_view to_string(InnovationKind kind);

/// Levy exponent f(w); the characteristic function of a period-T increment
/// is exp(T f(w)).
double levy_exponent(const InnovationSpec& spec, double omega);

/// Entropy-matched parameters shared by the Gaussian, Laplace-type and
/// Cauchy benchmark scenarios: all three unit-period increment laws have
/// differential entropy log(2 pi e) / 2.
///
/// For SymmetricAlphaStable only alpha = 1 is supported; its scale
/// c = sqrt(e / (8 pi)) is recovered from the unit-period Cauchy density
/// sqrt(8e/pi) / (e + 8 pi x^2).
InnovationSpec calibrated_spec(InnovationKind kind);

/// -int p log p of the unit-period increment density.
double differential_entropy_T1(const InnovationSpec& spec);

/// Characteristic spread of a period-T increment (std. dev. when finite,
/// the stable scale (cT)^(1/alpha) otherwise). Used to size grids.
double increment_scale(const InnovationSpec& spec, double T);

}  // namespace levysp
