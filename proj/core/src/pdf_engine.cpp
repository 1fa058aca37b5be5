#include "levysp/pdf_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>

#include "densities.hpp"
#include "fft.hpp"
#include "levysp/errors.hpp"
#include "quadrature.hpp"

namespace levysp {

namespace detail {

double log_bessel_k(double nu, double z) {
  nu = std::abs(nu);
  if (z < 500.0) return std::log(std::cyl_bessel_k(nu, z));
  const double mu = 4.0 * nu * nu;
  const double t = 8.0 * z;
  const double series = (mu - 1.0) / t + (mu - 1.0) * (mu - 9.0) / (2.0 * t * t);
  return 0.5 * std::log(std::numbers::pi / (2.0 * z)) - z + std::log1p(series);
}

double vg_log_density(double gamma, double T, double x) {
  const double nu = T - 0.5;
  const double z = gamma * std::abs(x);
  const double norm = std::log(gamma) - 0.5 * std::log(std::numbers::pi) -
                      nu * std::numbers::ln2 - std::lgamma(T);
  if (z == 0.0) {
    if (nu <= 0.0) return std::numeric_limits<double>::infinity();
    // |z|^nu K_nu(z) -> Gamma(nu) 2^(nu-1)
    return norm + std::lgamma(nu) + (nu - 1.0) * std::numbers::ln2;
  }
  return norm + nu * std::log(z) + log_bessel_k(nu, z);
}

double vg_upper_tail(double gamma, double T, double a) {
  if (T == 1.0) return 0.5 * std::exp(-gamma * a);
  const double span = (80.0 + 10.0 * T) / gamma;
  auto density = [&](double x) { return std::exp(vg_log_density(gamma, T, x)); };
  return detail::integrate(density, a, a + span, 400);
}

std::vector<double> poisson_mixture_weights(double mean) {
  std::vector<double> w;
  double p = std::exp(-mean);
  double cumulative = p;
  w.push_back(p);
  for (std::size_t n = 1; cumulative < 1.0 - 1e-12 && n < 100000; ++n) {
    p *= mean / static_cast<double>(n);
    w.push_back(p);
    cumulative += p;
  }
  return w;
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace detail

namespace {

using detail::Complex;

constexpr double kDecayThreshold = 1e-8;
constexpr double kConsistencyTolerance = 1e-5;
constexpr std::size_t kMaxInversionPoints = std::size_t{1} << 21;

void require_period(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("period T must be positive");
}

double gaussian_density(double s, double x) {
  const double z = x / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
}

double compound_poisson_density(const CompoundPoissonLaw& law, double T, double x) {
  const auto w = detail::poisson_mixture_weights(law.poisson_rate * T);
  double acc = 0.0;
  for (std::size_t n = 1; n < w.size(); ++n) {
    acc += w[n] * gaussian_density(law.amplitude_sigma * std::sqrt(static_cast<double>(n)), x);
  }
  return acc;
}

/// Mass of the continuous part above a > 0.
double upper_tail(const InnovationSpec& spec, double T, double a) {
  switch (spec.kind()) {
    case InnovationKind::Gaussian:
      return detail::normal_upper_tail(a / (spec.as<GaussianLaw>().sigma * std::sqrt(T)));
    case InnovationKind::CompoundPoisson: {
      const auto& law = spec.as<CompoundPoissonLaw>();
      const auto w = detail::poisson_mixture_weights(law.poisson_rate * T);
      double acc = 0.0;
      for (std::size_t n = 1; n < w.size(); ++n) {
        acc += w[n] * detail::normal_upper_tail(
                          a / (law.amplitude_sigma * std::sqrt(static_cast<double>(n))));
      }
      return acc;
    }
    case InnovationKind::SymmetricAlphaStable: {
      const double b = spec.as<StableLaw>().stable_scale * T;
      return std::atan2(b, a) / std::numbers::pi;
    }
    case InnovationKind::VarianceGamma:
      return detail::vg_upper_tail(spec.as<VarianceGammaLaw>().gamma, T, a);
  }
  return 0.0;
}

bool vg_unbounded(const InnovationSpec& spec, double T) {
  return spec.kind() == InnovationKind::VarianceGamma && T <= 0.5;
}

void fill_logs(GridPdf& pdf) {
  pdf.log_values.resize(pdf.values.size());
  std::transform(pdf.values.begin(), pdf.values.end(), pdf.log_values.begin(),
                 [](double v) { return std::log(v); });
}

/// Values of the continuous part of the period-T density on the fine grid
/// y_k = (k - M/2) delta, from exp(T f) minus the atom.
std::vector<double> invert_fine(const InnovationSpec& spec, double T, double atom, double delta,
                                std::size_t fine_points) {
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(fine_points) * delta);
  const std::size_t half = fine_points / 2;
  // exp(T f) is even, so evaluate it once per |w|.
  std::vector<double> phi(half + 1);
  for (std::size_t j = 0; j <= half; ++j) {
    phi[j] = std::exp(T * levy_exponent(spec, static_cast<double>(j) * dw)) - atom;
  }
  std::vector<Complex> buf(fine_points);
  for (std::size_t j = 0; j < fine_points; ++j) {
    const double v = phi[j >= half ? j - half : half - j];
    buf[j] = (j & 1U) ? -v : v;
  }
  detail::fft_inplace(buf, +1);
  const double scale = dw / (2.0 * std::numbers::pi);
  std::vector<double> out(fine_points);
  for (std::size_t k = 0; k < fine_points; ++k) {
    out[k] = ((k & 1U) ? -scale : scale) * buf[k].real();
  }
  // (1 + w^2/g^2)^-T decays like (g/w)^(2T); at x = 0 the band-limited sum
  // misses (1/pi) * int_W^inf of that tail. Elsewhere the tail oscillates away.
  if (spec.kind() == InnovationKind::VarianceGamma && T > 0.5) {
    const double g = spec.as<VarianceGammaLaw>().gamma;
    const double band = static_cast<double>(half) * dw;
    out[half] += std::pow(g, 2.0 * T) * std::pow(band, 1.0 - 2.0 * T) / (std::numbers::pi * (2.0 * T - 1.0));
  }
  return out;
}

std::vector<double> decimate(const std::vector<double>& fine, std::size_t coarse_points,
                             std::size_t oversampling) {
  const std::size_t fine_center = fine.size() / 2;
  const std::size_t coarse_center = coarse_points / 2;
  std::vector<double> out(coarse_points);
  for (std::size_t i = 0; i < coarse_points; ++i) {
    out[i] = fine[fine_center - coarse_center * oversampling + i * oversampling];
  }
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ArgumentError("grid half_width must be positive");
  }
  if (num_points < 256 || !std::has_single_bit(num_points)) {
    throw ArgumentError("grid num_points must be a power of two >= 256");
  }
}

double GridPdf::total_mass() const noexcept {
  double acc = 0.0;
  for (double v : values) acc += v;
  return atom_at_zero + acc * step + tail_mass;
}

double GridPdf::interpolate(double xq) const noexcept {
  if (values.empty()) return 0.0;
  const double pos = (xq - x_min) / step;
  if (pos < 0.0 || pos > static_cast<double>(values.size() - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values.size()) return values.back();
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * values[i] + t * values[i + 1];
}

void GridPdf::write_csv(std::ostream& out) const {
  out.precision(17);
  out << "# atom_at_zero=" << atom_at_zero << '\n';
  out << "# tail_mass=" << tail_mass << '\n';
  if (unbounded_at_zero) out << "# unbounded_at_zero=1\n";
  out << "x,density\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << x(i) << ',' << values[i] << '\n';
}

GridSpec default_grid(const InnovationSpec& spec, double T) {
  require_period(T);
  const double scale = increment_scale(spec, T);
  const double width =
      spec.kind() == InnovationKind::SymmetricAlphaStable ? 64.0 * scale : 12.0 * scale;
  return GridSpec{width, 4096};
}

bool has_closed_form(const InnovationSpec& spec, double /*T*/) noexcept {
  return spec.kind() != InnovationKind::SymmetricAlphaStable || spec.is_cauchy();
}

double increment_atom(const InnovationSpec& spec, double T) noexcept {
  if (spec.kind() != InnovationKind::CompoundPoisson) return 0.0;
  return std::exp(-spec.as<CompoundPoissonLaw>().poisson_rate * T);
}

double increment_density(const InnovationSpec& spec, double T, double x) {
  require_period(T);
  if (!has_closed_form(spec, T)) {
    throw UnsupportedClosedFormError("no closed-form increment density for " + spec.to_string());
  }
  switch (spec.kind()) {
    case InnovationKind::Gaussian:
      return gaussian_density(spec.as<GaussianLaw>().sigma * std::sqrt(T), x);
    case InnovationKind::CompoundPoisson:
      return compound_poisson_density(spec.as<CompoundPoissonLaw>(), T, x);
    case InnovationKind::SymmetricAlphaStable: {
      const double b = spec.as<StableLaw>().stable_scale * T;
      return b / (std::numbers::pi * (b * b + x * x));
    }
    case InnovationKind::VarianceGamma:
      return std::exp(detail::vg_log_density(spec.as<VarianceGammaLaw>().gamma, T, x));
  }
  return 0.0;
}

GridPdf increment_pdf_closed_form(const InnovationSpec& spec, double T, const GridSpec& grid) {
  require_period(T);
  grid.validate();
  if (!has_closed_form(spec, T)) {
    throw UnsupportedClosedFormError("no closed-form increment density for " + spec.to_string());
  }
  GridPdf pdf;
  pdf.step = grid.step();
  pdf.x_min = grid.x(0);
  pdf.values.resize(grid.num_points);
  for (std::size_t i = 0; i < grid.num_points; ++i) {
    pdf.values[i] = increment_density(spec, T, grid.x(i));
  }
  if (vg_unbounded(spec, T)) {
    const std::size_t c = grid.center();
    pdf.values[c] = 2.0 * pdf.values[c + 1] - pdf.values[c + 2];
    pdf.unbounded_at_zero = true;
  }
  pdf.atom_at_zero = increment_atom(spec, T);
  const double h = 0.5 * pdf.step;
  pdf.tail_mass = upper_tail(spec, T, grid.half_width - h) + upper_tail(spec, T, grid.half_width + h);
  fill_logs(pdf);
  return pdf;
}

GridPdf increment_pdf_char_inversion(const InnovationSpec& spec, double T, const GridSpec& grid) {
  require_period(T);
  grid.validate();
  const double atom = increment_atom(spec, T);
  const double dx = grid.step();
  const std::size_t n = grid.num_points;

  // Heavy tails alias back into the window unless the period is extended.
  const std::size_t extension = spec.kind() == InnovationKind::SymmetricAlphaStable ? 16 : 2;
  if (n * extension > kMaxInversionPoints) {
    throw ResolutionError("char inversion: grid too large (num_points * extension exceeds 2^21)");
  }
  auto residual_cf = [&](double w) { return std::abs(std::exp(T * levy_exponent(spec, w)) - atom); };

  std::size_t oversampling = 1;
  while (residual_cf(std::numbers::pi * static_cast<double>(oversampling) / dx) > kDecayThreshold &&
         n * extension * oversampling * 2 <= kMaxInversionPoints) {
    oversampling *= 2;
  }
  const bool decayed =
      residual_cf(std::numbers::pi * static_cast<double>(oversampling) / dx) <= kDecayThreshold;

  const std::size_t fine_points = n * extension * oversampling;
  std::vector<double> fine =
      invert_fine(spec, T, atom, dx / static_cast<double>(oversampling), fine_points);
  std::vector<double> coarse = decimate(fine, n, oversampling);
  const bool unbounded = vg_unbounded(spec, T);

  if (!decayed) {
    if (oversampling < 2) {
      throw ResolutionError(
          "char inversion: characteristic function not resolved at the grid's Nyquist "
          "frequency; use a finer grid (larger num_points or smaller half_width)");
    }
    // Algebraic decay: accept only if halving the bandwidth leaves the
    // decimated samples unchanged to tolerance.
    const auto half = decimate(invert_fine(spec, T, atom, dx / static_cast<double>(oversampling / 2),
                                           fine_points / 2),
                               n, oversampling / 2);
    double peak = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (unbounded && i == grid.center()) continue;
      peak = std::max(peak, std::abs(coarse[i]));
      diff = std::max(diff, std::abs(coarse[i] - half[i]));
    }
    if (diff > kConsistencyTolerance * std::max(1.0, peak)) {
      throw ResolutionError(
          "char inversion: slowly decaying characteristic function not resolved (bandwidth "
          "check differs by " + std::to_string(diff) + "); use a coarser step or a wider grid");
    }
  }

  // Clamp spectral-truncation lobes and renormalize the fine grid so that the
  // continuous part carries exactly 1 - atom.
  double fine_mass = 0.0;
  const double delta = dx / static_cast<double>(oversampling);
  for (double& v : fine) {
    v = std::max(v, 0.0);
    fine_mass += v * delta;
  }
  if (!(fine_mass > 0.0)) throw NumericalError("char inversion produced no mass");
  const double renorm = (1.0 - atom) / fine_mass;

  GridPdf pdf;
  pdf.step = dx;
  pdf.x_min = grid.x(0);
  pdf.values = std::move(coarse);
  for (double& v : pdf.values) v = std::max(v, 0.0) * renorm;
  if (unbounded) {
    const std::size_t c = grid.center();
    pdf.values[c] = 2.0 * pdf.values[c + 1] - pdf.values[c + 2];
    pdf.unbounded_at_zero = true;
  }

  // Mass outside the window [-W - dx/2, W - dx/2), read off the extended grid.
  const std::size_t fine_center = fine_points / 2;
  const std::size_t lo = fine_center - (n / 2) * oversampling - oversampling / 2;
  const std::size_t hi = fine_center + (n / 2) * oversampling - oversampling / 2;
  double outside = 0.0;
  for (std::size_t k = 0; k < fine_points; ++k) {
    if (k < lo || k >= hi) outside += fine[k] * renorm * delta;
  }
  pdf.tail_mass = outside;
  pdf.atom_at_zero = atom;
  fill_logs(pdf);
  return pdf;
}

std::vector<double> increment_cell_masses(const InnovationSpec& spec, double T, double step,
                                          std::size_t half_count) {
  require_period(T);
  if (!(step > 0.0)) throw ArgumentError("cell masses: step must be positive");
  const std::size_t size = 2 * half_count + 1;
  std::vector<double> masses(size, 0.0);
  const double h = 0.5 * step;
  auto edge = [&](std::size_t j) { return (static_cast<double>(j) + 0.5) * step; };

  switch (spec.kind()) {
    case InnovationKind::Gaussian:
    case InnovationKind::CompoundPoisson:
    case InnovationKind::VarianceGamma:
      if (spec.kind() != InnovationKind::VarianceGamma || T == 1.0) {
        // Exact CDF differences.
        for (std::size_t j = 1; j <= half_count; ++j) {
          const double m = upper_tail(spec, T, edge(j - 1)) - upper_tail(spec, T, edge(j));
          masses[half_count + j] = masses[half_count - j] = std::max(m, 0.0);
        }
        masses[half_count] = (1.0 - increment_atom(spec, T)) - 2.0 * upper_tail(spec, T, h);
      } else {
        const double gamma = spec.as<VarianceGammaLaw>().gamma;
        auto density = [&](double x) { return std::exp(detail::vg_log_density(gamma, T, x)); };
        double side = 0.0;
        for (std::size_t j = 1; j <= half_count; ++j) {
          const double m = detail::integrate(density, edge(j - 1), edge(j), 2);
          masses[half_count + j] = masses[half_count - j] = m;
          side += m;
        }
        const double beyond = detail::vg_upper_tail(gamma, T, edge(half_count));
        masses[half_count] = std::max(1.0 - 2.0 * (side + beyond), 0.0);
      }
      break;
    case InnovationKind::SymmetricAlphaStable:
      if (spec.is_cauchy()) {
        const double b = spec.as<StableLaw>().stable_scale * T;
        for (std::size_t j = 1; j <= half_count; ++j) {
          const double jd = static_cast<double>(j);
          // atan(u) - atan(v) for u, v the cell edges over b
          const double m = std::atan((step / b) / (1.0 + (jd * jd - 0.25) * (step / b) * (step / b))) /
                           std::numbers::pi;
          masses[half_count + j] = masses[half_count - j] = m;
        }
        masses[half_count] = 2.0 * std::atan(h / b) / std::numbers::pi;
      } else {
        const std::size_t points = std::bit_ceil(std::max<std::size_t>(256, 2 * half_count + 2));
        const GridSpec grid{0.5 * static_cast<double>(points) * step, points};
        const GridPdf pdf = increment_pdf_char_inversion(spec, T, grid);
        for (std::size_t j = 0; j <= half_count; ++j) {
          const double m = pdf.values[grid.center() + j] * step;
          masses[half_count + j] = masses[half_count - j] = m;
        }
      }
      break;
  }
  masses[half_count] += increment_atom(spec, T);
  return masses;
}

Penalty::Penalty(const InnovationSpec& spec, double T) : spec_(spec), period_(T) {
  require_period(T);
  if (spec.kind() == InnovationKind::CompoundPoisson) {
    throw DegeneratePenaltyError(
        "MAP penalty is degenerate for compound-Poisson increments (atom at zero); the MAP "
        "estimate is the all-zero signal");
  }
  if (vg_unbounded(spec, T)) {
    throw ArgumentError("MAP penalty needs a finite p_u(0); variance-gamma with T <= 1/2 is unbounded");
  }
  if (spec.kind() == InnovationKind::VarianceGamma) {
    log_p0_ = detail::vg_log_density(spec.as<VarianceGammaLaw>().gamma, T, 0.0);
  }
  if (!has_closed_form(spec, T)) {
    auto table = std::make_shared<GridPdf>(increment_pdf_char_inversion(spec, T, default_grid(spec, T)));
    log_p0_ = table->log_values[table->size() / 2];
    table_ = std::move(table);
  }
}

double Penalty::operator()(double x) const {
  switch (spec_.kind()) {
    case InnovationKind::Gaussian: {
      const double s = spec_.as<GaussianLaw>().sigma;
      return x * x / (2.0 * s * s * period_);
    }
    case InnovationKind::VarianceGamma: {
      const double gamma = spec_.as<VarianceGammaLaw>().gamma;
      if (period_ == 1.0) return gamma * std::abs(x);
      return log_p0_ - detail::vg_log_density(gamma, period_, x);
    }
    case InnovationKind::SymmetricAlphaStable:
      if (spec_.is_cauchy()) {
        const double r = x / (spec_.as<StableLaw>().stable_scale * period_);
        return std::log1p(r * r);
      }
      break;
    case InnovationKind::CompoundPoisson: break;
  }
  // Table lookup; beyond the window continue with the |x|^(-1-alpha) tail.
  const GridPdf& t = *table_;
  const double edge = -t.x_min - 2.0 * t.step;
  const double ax = std::abs(x);
  if (ax <= edge) return log_p0_ - std::log(t.interpolate(ax));
  const double alpha = spec_.as<StableLaw>().alpha;
  return log_p0_ - std::log(t.interpolate(edge)) + (1.0 + alpha) * std::log(ax / edge);
}

double Penalty::derivative(double x) const {
  const double sign = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  const double ax = std::abs(x);
  switch (spec_.kind()) {
    case InnovationKind::Gaussian: {
      const double s = spec_.as<GaussianLaw>().sigma;
      return x / (s * s * period_);
    }
    case InnovationKind::VarianceGamma: {
      const double gamma = spec_.as<VarianceGammaLaw>().gamma;
      if (period_ == 1.0 || ax == 0.0) return period_ == 1.0 ? gamma * sign : 0.0;
      // d/dz [z^nu K_nu(z)] = -z^nu K_(nu-1)(z)
      const double nu = period_ - 0.5;
      const double z = gamma * ax;
      return sign * gamma * std::exp(detail::log_bessel_k(nu - 1.0, z) - detail::log_bessel_k(nu, z));
    }
    case InnovationKind::SymmetricAlphaStable:
      if (spec_.is_cauchy()) {
        const double b = spec_.as<StableLaw>().stable_scale * period_;
        return 2.0 * x / (b * b + x * x);
      }
      break;
    case InnovationKind::CompoundPoisson: break;
  }
  const GridPdf& t = *table_;
  const double edge = -t.x_min - 2.0 * t.step;
  if (ax <= edge - t.step) {
    const double h = t.step;
    return sign * ((*this)(ax + h) - (*this)(std::max(ax - h, 0.0))) / (ax + h - std::max(ax - h, 0.0));
  }
  return sign * (1.0 + spec_.as<StableLaw>().alpha) / ax;
}

double psi(const InnovationSpec& spec, double T, double x) { return Penalty(spec, T)(x); }

}  // namespace levysp
