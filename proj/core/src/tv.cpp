#include <algorithm>
#include <cmath>
#include <deque>

#include "estimator_detail.hpp"
#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"

namespace levysp {

namespace {

/// Derivative of the running cost, a nondecreasing piecewise-linear function
/// with possible upward jumps. Crossing knot j from left to right adds
/// (da, db) to the (slope, intercept) pair.
class PiecewiseDerivative {
 public:
  struct Knot {
    double x, da, db;
  };

  /// s - y + w sign(s): the first node's cost includes w |s - 0|.
  PiecewiseDerivative(double y, double w)
      : left_a_(1.0), left_b_(-y - w), right_a_(1.0), right_b_(-y + w) {
    knots_.push_back({0.0, 0.0, 2.0 * w});
  }

  /// Smallest s with derivative >= v; flattens the derivative to v below it.
  double clip_below(double v) {
    double a = left_a_, b = left_b_;
    while (!knots_.empty()) {
      const Knot kn = knots_.front();
      const double before = a * kn.x + b;
      if (before >= v) break;
      knots_.pop_front();
      a += kn.da;
      b += kn.db;
      if (a * kn.x + b >= v) return insert_front(kn.x, a, b, v);
    }
    return insert_front((v - b) / a, a, b, v);
  }

  /// Largest s with derivative <= v; flattens the derivative to v above it.
  double clip_above(double v) {
    double a = right_a_, b = right_b_;
    while (!knots_.empty()) {
      const Knot kn = knots_.back();
      const double after = a * kn.x + b;
      if (after <= v) break;
      knots_.pop_back();
      a -= kn.da;
      b -= kn.db;
      if (a * kn.x + b <= v) return insert_back(kn.x, a, b, v);
    }
    return insert_back((v - b) / a, a, b, v);
  }

  void add_quadratic(double y) {
    left_a_ += 1.0;
    left_b_ -= y;
    right_a_ += 1.0;
    right_b_ -= y;
  }

 private:
  double insert_front(double t, double a, double b, double v) {
    knots_.push_front({t, a, b - v});
    left_a_ = 0.0;
    left_b_ = v;
    return t;
  }
  double insert_back(double t, double a, double b, double v) {
    knots_.push_back({t, -a, v - b});
    right_a_ = 0.0;
    right_b_ = v;
    return t;
  }

  std::deque<Knot> knots_;
  double left_a_, left_b_, right_a_, right_b_;
};

}  // namespace

double tv_cost(const Observations& obs, std::span<const double> s, double lambda) {
  double reg = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) reg += std::abs(s[k] - s[k - 1]);
  return detail::data_misfit(obs, s) + lambda * reg;
}

DenoiseResult tv_denoise(const Observations& obs, double lambda) {
  obs.validate();
  detail::require_stride_one(obs, "tv_denoise");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("tv_denoise: lambda must be positive");
  }
  const std::size_t m = obs.count();
  DenoiseResult result;
  result.estimate.assign(m + 1, 0.0);
  if (m == 0) return result;

  // Halved cost: sum (s - y)^2 / 2 + (lambda / 2) sum |ds|.
  const double w = 0.5 * lambda;
  const auto& y = obs.noisy;
  PiecewiseDerivative deriv(y[1], w);
  std::vector<double> lo(m + 1), hi(m + 1);
  for (std::size_t k = 1; k < m; ++k) {
    lo[k] = deriv.clip_below(-w);
    hi[k] = deriv.clip_above(w);
    deriv.add_quadratic(y[k + 1]);
  }
  auto& s = result.estimate;
  s[m] = deriv.clip_below(0.0);
  for (std::size_t k = m - 1; k >= 1; --k) s[k] = std::clamp(s[k + 1], lo[k], hi[k]);
  result.iterations = 1;
  return result;
}

}  // namespace levysp
