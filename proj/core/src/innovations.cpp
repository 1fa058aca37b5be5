#include "levysp/innovations.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "levysp/errors.hpp"
#include "levysp/pdf_engine.hpp"
#include "quadrature.hpp"

namespace levysp {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ArgumentError(std::string(name) + " must be positive and finite");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError(std::string(key), "invalid number for '" + std::string(key) + "': " +
                                            std::string(text));
  }
  return v;
}

}  // namespace

InnovationSpec InnovationSpec::gaussian(double sigma) {
  require_positive(sigma, "sigma");
  return InnovationSpec(GaussianLaw{sigma});
}

InnovationSpec InnovationSpec::compound_poisson(double poisson_rate, double amplitude_sigma) {
  require_positive(poisson_rate, "poisson_rate");
  require_positive(amplitude_sigma, "amplitude_sigma");
  return InnovationSpec(CompoundPoissonLaw{poisson_rate, amplitude_sigma});
}

InnovationSpec InnovationSpec::stable(double alpha, double stable_scale) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ArgumentError("alpha must lie in (0, 2)");
  require_positive(stable_scale, "stable_scale");
  return InnovationSpec(StableLaw{alpha, stable_scale});
}

InnovationSpec InnovationSpec::variance_gamma(double gamma) {
  require_positive(gamma, "gamma");
  return InnovationSpec(VarianceGammaLaw{gamma});
}

InnovationKind InnovationSpec::kind() const noexcept {
  return std::visit(Overloaded{
                        [](const GaussianLaw&) { return InnovationKind::Gaussian; },
                        [](const CompoundPoissonLaw&) { return InnovationKind::CompoundPoisson; },
                        [](const StableLaw&) { return InnovationKind::SymmetricAlphaStable; },
                        [](const VarianceGammaLaw&) { return InnovationKind::VarianceGamma; },
                    },
                    law_);
}

bool InnovationSpec::is_cauchy() const noexcept {
  const auto* s = std::get_if<StableLaw>(&law_);
  return s != nullptr && s->alpha == 1.0;
}

std::string InnovationSpec::to_string() const {
  return std::visit(
      Overloaded{
          [](const GaussianLaw& g) { return "kind=gaussian sigma=" + format_double(g.sigma); },
          [](const CompoundPoissonLaw& c) {
            return "kind=compound_poisson poisson_rate=" + format_double(c.poisson_rate) +
                   " amplitude_sigma=" + format_double(c.amplitude_sigma);
          },
          [](const StableLaw& s) {
            if (s.alpha == 1.0) return "kind=cauchy stable_scale=" + format_double(s.stable_scale);
            return "kind=stable alpha=" + format_double(s.alpha) +
                   " stable_scale=" + format_double(s.stable_scale);
          },
          [](const VarianceGammaLaw& v) {
            return "kind=variance_gamma gamma=" + format_double(v.gamma);
          },
      },
      law_);
}

InnovationSpec InnovationSpec::parse(std::string_view text) {
  std::map<std::string, std::string, std::less<>> fields;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(token, "expected key=value, got '" + token + "'");
    }
    auto key = token.substr(0, eq);
    if (!fields.emplace(key, token.substr(eq + 1)).second) {
      throw ConfigError(key, "duplicate key '" + key + "'");
    }
  }

  const auto kind_it = fields.find("kind");
  if (kind_it == fields.end()) throw ConfigError("kind", "missing 'kind'");
  const std::string kind = kind_it->second;
  fields.erase(kind_it);

  auto take = [&](const char* key) {
    auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError(key, std::string("missing '") + key + "'");
    const double v = parse_double(key, it->second);
    fields.erase(it);
    return v;
  };

  std::optional<InnovationSpec> spec;
  if (kind == "gaussian") {
    spec = gaussian(take("sigma"));
  } else if (kind == "compound_poisson") {
    const double rate = take("poisson_rate");
    spec = compound_poisson(rate, take("amplitude_sigma"));
  } else if (kind == "cauchy") {
    if (fields.contains("alpha") && take("alpha") != 1.0) {
      throw ConfigError("alpha", "kind=cauchy requires alpha=1");
    }
    spec = cauchy(take("stable_scale"));
  } else if (kind == "stable") {
    const double alpha = take("alpha");
    spec = stable(alpha, take("stable_scale"));
  } else if (kind == "variance_gamma") {
    spec = variance_gamma(take("gamma"));
  } else {
    throw ConfigError("kind", "unknown innovation kind '" + kind + "'");
  }
  if (!fields.empty()) {
    const auto& key = fields.begin()->first;
    throw ConfigError(key, "key '" + key + "' does not apply to kind=" + kind);
  }
  return *spec;
}

std::string_view to_string(InnovationKind kind) {
  switch (kind) {
    case InnovationKind::Gaussian: return "gaussian";
    case InnovationKind::CompoundPoisson: return "compound_poisson";
    case InnovationKind::SymmetricAlphaStable: return "stable";
    case InnovationKind::VarianceGamma: return "variance_gamma";
  }
  return "unknown";
}

double levy_exponent(const InnovationSpec& spec, double omega) {
  if (!std::isfinite(omega)) throw ArgumentError("levy_exponent: omega must be finite");
  return std::visit(
      Overloaded{
          [&](const GaussianLaw& g) { return -0.5 * g.sigma * g.sigma * omega * omega; },
          [&](const CompoundPoissonLaw& c) {
            const double s = c.amplitude_sigma * omega;
            return c.poisson_rate * std::expm1(-0.5 * s * s);
          },
          [&](const StableLaw& s) { return -s.stable_scale * std::pow(std::abs(omega), s.alpha); },
          [&](const VarianceGammaLaw& v) {
            const double r = omega / v.gamma;
            return -std::log1p(r * r);
          },
      },
      spec.law());
}

InnovationSpec calibrated_spec(InnovationKind kind) {
  using std::numbers::e;
  using std::numbers::pi;
  switch (kind) {
    case InnovationKind::Gaussian: return InnovationSpec::gaussian(1.0);
    case InnovationKind::SymmetricAlphaStable: return InnovationSpec::cauchy(std::sqrt(e / (8.0 * pi)));
    case InnovationKind::VarianceGamma: return InnovationSpec::variance_gamma(std::sqrt(2.0 * e / pi));
    case InnovationKind::CompoundPoisson: break;
  }
  throw UnsupportedError("calibrated_spec: no entropy-matched parameters for " +
                         std::string(to_string(kind)));
}

double increment_scale(const InnovationSpec& spec, double T) {
  return std::visit(
      Overloaded{
          [&](const GaussianLaw& g) { return g.sigma * std::sqrt(T); },
          [&](const CompoundPoissonLaw& c) {
            return c.amplitude_sigma * std::sqrt(c.poisson_rate * T);
          },
          [&](const StableLaw& s) { return std::pow(s.stable_scale * T, 1.0 / s.alpha); },
          [&](const VarianceGammaLaw& v) { return std::sqrt(2.0 * T) / v.gamma; },
      },
      spec.law());
}

double differential_entropy_T1(const InnovationSpec& spec) {
  if (spec.kind() == InnovationKind::CompoundPoisson) {
    throw UnsupportedError("differential entropy undefined: compound-Poisson increments have an atom");
  }
  constexpr double T = 1.0;
  auto plogp = [](double p) { return p > 0.0 ? p * std::log(p) : 0.0; };

  if (has_closed_form(spec, T)) {
    // x = s tan(t) maps the real line onto (-pi/2, pi/2); heavy tails become
    // integrable endpoints.
    const double s = increment_scale(spec, T);
    auto integrand = [&](double t) {
      const double c = std::cos(t);
      if (c <= 0.0) return 0.0;
      const double x = s * std::tan(t);
      return plogp(increment_density(spec, T, x)) * s / (c * c);
    };
    // t = (pi/2)(1 - v^2) softens the logarithmic endpoint singularity.
    auto graded = [&](double v) {
      return integrand(0.5 * std::numbers::pi * (1.0 - v * v)) * std::numbers::pi * v;
    };
    return -2.0 * detail::integrate(graded, 0.0, 1.0, 4000);
  }

  const GridPdf pdf = increment_pdf_char_inversion(spec, T, default_grid(spec, T));
  double h = 0.0;
  for (double v : pdf.values) h -= plogp(v) * pdf.step;
  return h;
}

}  // namespace levysp
