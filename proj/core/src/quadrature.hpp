#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace levysp::detail {

/// Ten-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration.
struct GaussLegendre10 {
  static constexpr std::size_t kOrder = 10;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendre10() {
    constexpr std::size_t n = kOrder;
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  static const GaussLegendre10& instance() {
    static const GaussLegendre10 rule;
    return rule;
  }
};

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` panels.
template <class F>
double integrate(F&& f, double a, double b, std::size_t panels) {
  const auto& rule = GaussLegendre10::instance();
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * width;
    const double half = 0.5 * width;
    double acc = 0.0;
    for (std::size_t i = 0; i < GaussLegendre10::kOrder; ++i) {
      acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    total += acc * half;
  }
  return total;
}

}  // namespace levysp::detail
