#include <algorithm>
#include <cmath>

#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"
#include "quadrature.hpp"

namespace levysp {

namespace {

/// p_y(y) up to a y-independent factor, as a chain of quadratures over a
/// shared value set (Gauss-Legendre nodes plus the origin, which carries the
/// atom of a compound-Poisson chain).
class ChainEvidence {
 public:
  ChainEvidence(const Observations& obs, const InnovationSpec& spec, double T) : var_(obs.noise_variance) {
    const double sigma_n = std::sqrt(var_);
    const auto [lo_it, hi_it] = std::minmax_element(obs.noisy.begin() + 1, obs.noisy.end());
    const double lo = *lo_it - 10.0 * sigma_n, hi = *hi_it + 10.0 * sigma_n;
    const auto panels = static_cast<std::size_t>(
        std::clamp(std::ceil(60.0 * (hi - lo) / (20.0 * sigma_n)), 60.0, 200.0));
    const auto& rule = detail::GaussLegendre10::instance();
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = lo + (static_cast<double>(p) + 0.5) * width;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        values_.push_back(mid + 0.5 * width * rule.nodes[q]);
        weights_.push_back(0.5 * width * rule.weights[q]);
      }
    }
    origin_ = values_.size();
    values_.push_back(0.0);
    weights_.push_back(0.0);

    atom_ = increment_atom(spec, T);
    std::optional<GridPdf> table;
    if (!has_closed_form(spec, T)) table = increment_pdf_char_inversion(spec, T, default_grid(spec, T));
    auto density = [&](double x) {
      return table ? table->interpolate(x) : increment_density(spec, T, x);
    };
    const std::size_t v = values_.size();
    kernel_.resize(v * v);
    for (std::size_t a = 0; a < v; ++a) {
      for (std::size_t b = 0; b < v; ++b) {
        const double p = density(values_[b] - values_[a]);
        kernel_[a * v + b] = std::isfinite(p) ? weights_[b] * p : 0.0;
      }
    }
  }

  double operator()(std::span<const double> y) const {
    const std::size_t v = values_.size();
    const std::size_t m = y.size();
    // back[a] = evidence of nodes k+1..m given s_k = values_[a].
    std::vector<double> back(v, 1.0), next(v), lik(v);
    for (std::size_t k = m; k >= 1; --k) {
      for (std::size_t b = 0; b < v; ++b) {
        const double r = values_[b] - y[k - 1];
        lik[b] = std::exp(-r * r / (2.0 * var_)) * back[b];
      }
      // The first node is reached from s_0 = 0 only.
      const std::size_t first = k == 1 ? origin_ : 0;
      const std::size_t last = k == 1 ? origin_ + 1 : v;
      for (std::size_t a = first; a < last; ++a) {
        double acc = atom_ * lik[a];
        for (std::size_t b = 0; b < v; ++b) acc += kernel_[a * v + b] * lik[b];
        next[a] = acc;
      }
      back.swap(next);
    }
    return back[origin_];
  }

 private:
  double var_;
  std::vector<double> values_, weights_, kernel_;
  std::size_t origin_ = 0;
  double atom_ = 0.0;
};

}  // namespace

double tweedie_identity_check(const Observations& obs, const InnovationSpec& spec, double T,
                              const DenoiseResult& result) {
  obs.validate();
  const std::size_t m = obs.count();
  if (m > 3) throw UnsupportedError("tweedie_identity_check: at most 3 observations");
  if (obs.stride != 1) throw ArgumentError("tweedie_identity_check requires stride 1");
  if (result.estimate.size() != obs.fine_grid_length) {
    throw ArgumentError("tweedie_identity_check: estimate length does not match the observations");
  }
  std::vector<double> y(obs.noisy.begin() + 1, obs.noisy.end());
  double gap = 0.0;
  if (obs.noise_variance == 0.0) {
    for (std::size_t k = 1; k <= m; ++k) gap = std::max(gap, std::abs(result.estimate[k] - y[k - 1]));
    return gap;
  }
  const ChainEvidence evidence(obs, spec, T);
  const double h = 1e-3 * std::sqrt(obs.noise_variance);
  for (std::size_t k = 0; k < m; ++k) {
    auto yp = y, ym = y;
    yp[k] += h;
    ym[k] -= h;
    const double zp = evidence(yp), zm = evidence(ym);
    if (!(zp > 0.0) || !(zm > 0.0)) throw NumericalError("tweedie_identity_check: evidence underflow");
    const double grad = (std::log(zp) - std::log(zm)) / (2.0 * h);
    const double rhs = y[k] + obs.noise_variance * grad;
    gap = std::max(gap, std::abs(result.estimate[k + 1] - rhs));
  }
  return gap;
}

}  // namespace levysp
