#pragma once

#include <span>
#include <vector>

#include "levysp/sampler.hpp"

namespace levysp::detail {

/// Solves the SPD tridiagonal system with diagonal `diag` and symmetric
/// off-diagonal `off` (off[i] couples i and i+1). Thomas algorithm.
std::vector<double> solve_tridiagonal(std::span<const double> diag, std::span<const double> off,
                                      std::span<const double> rhs);

/// Minimizer of sum_obs (s - y)^2 + sum_k edge[k] (s[k] - s[k-1])^2 over the
/// fine grid with s[0] = 0; edge has K entries (edge[k-1] weights difference k).
/// Returns s[0..K].
std::vector<double> solve_weighted_quadratic(const Observations& obs, std::span<const double> edge,
                                             double* relative_residual = nullptr);

/// sum over observed nodes i >= 1 of (s[i * stride] - y[i])^2.
double data_misfit(const Observations& obs, std::span<const double> s);

void require_stride_one(const Observations& obs, const char* who);

}  // namespace levysp::detail
