#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "levysp/innovations.hpp"

namespace levysp {

/// Uniform symmetric grid x_i = (i - N/2) * dx, dx = 2W / N, i in [0, N).
/// The origin is always a grid point (index N/2).
struct GridSpec {
  double half_width = 1.0;     ///< W
  std::size_t num_points = 4096;  ///< N, a power of two >= 256

  double step() const noexcept { return 2.0 * half_width / static_cast<double>(num_points); }
  double x(std::size_t i) const noexcept {
    return (static_cast<double>(i) - static_cast<double>(num_points / 2)) * step();
  }
  std::size_t center() const noexcept { return num_points / 2; }
  void validate() const;
};

/// A density sampled on a GridSpec, with an optional probability atom at the
/// origin and the probability mass lying outside the grid window.
///
/// Invariant: atom_at_zero + sum(values) * step + tail_mass == 1.
struct GridPdf {
  double x_min = 0.0;
  double step = 1.0;
  std::vector<double> values;
  std::vector<double> log_values;
  double atom_at_zero = 0.0;
  double tail_mass = 0.0;
  /// The continuous part diverges at the origin; values at x = 0 hold a
  /// neighbour-extrapolated finite stand-in.
  bool unbounded_at_zero = false;

  std::size_t size() const noexcept { return values.size(); }
  double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * step; }
  /// atom + Riemann mass + tail mass.
  double total_mass() const noexcept;
  /// Linear interpolation; zero outside the grid.
  double interpolate(double xq) const noexcept;
  void write_csv(std::ostream& out) const;
};

/// Default grid for a (law, period): N = 4096 and W = 12 std. dev. for
/// finite-variance laws, W = 64 (cT)^(1/alpha) for stable laws.
GridSpec default_grid(const InnovationSpec& spec, double T);

/// True when increment_density() has an analytic form for (spec, T).
bool has_closed_form(const InnovationSpec& spec, double T) noexcept;

/// Analytic density of the continuous part of a period-T increment at x.
/// Throws UnsupportedClosedFormError when has_closed_form() is false.
/// For variance-gamma with T <= 1/2 the value at x = 0 is +infinity.
double increment_density(const InnovationSpec& spec, double T, double x);

/// Weight of the atom at the origin of a period-T increment (exp(-lambda T)
/// for compound Poisson, zero otherwise).
double increment_atom(const InnovationSpec& spec, double T) noexcept;

GridPdf increment_pdf_closed_form(const InnovationSpec& spec, double T, const GridSpec& grid);

/// Inverse Fourier transform of exp(T f(w)) with P(w) = int p(x) exp(-j w x) dx.
/// An atom (compound Poisson) is split off analytically before inversion.
/// Throws ResolutionError when the characteristic function cannot be
/// resolved on the grid.
GridPdf increment_pdf_char_inversion(const InnovationSpec& spec, double T, const GridSpec& grid);

/// Probability mass of a period-T increment in each cell [(j-1/2)dx, (j+1/2)dx],
/// j = -half_count..half_count, atom included in the centre cell. Used as the
/// transition kernel of grid message passing.
std::vector<double> increment_cell_masses(const InnovationSpec& spec, double T, double step,
                                          std::size_t half_count);

/// MAP penalty Psi_T(x) = -log p_u(x) + log p_u(0), so Psi_T(0) = 0.
///
/// Uses the closed form when available, otherwise a char-inversion table
/// (built once, immutable, safe to share between threads).
class Penalty {
 public:
  Penalty(const InnovationSpec& spec, double T);

  double operator()(double x) const;
  /// dPsi/dx
  double derivative(double x) const;

  const InnovationSpec& spec() const noexcept { return spec_; }
  double period() const noexcept { return period_; }

 private:
  InnovationSpec spec_;
  double period_;
  double log_p0_ = 0.0;
  std::shared_ptr<const GridPdf> table_;
};

double psi(const InnovationSpec& spec, double T, double x);

}  // namespace levysp
