#pragma once

#include <vector>

namespace levysp::detail {

/// log K_nu(z) for z > 0, switching to the large-argument expansion where
/// the direct value would underflow.
double log_bessel_k(double nu, double z);

/// log of the symmetric variance-gamma (symm-gamma) density
/// gamma |gamma x|^(T-1/2) K_(T-1/2)(|gamma x|) / (sqrt(pi) 2^(T-1/2) Gamma(T)).
/// Returns +inf at x = 0 when T <= 1/2.
double vg_log_density(double gamma, double T, double x);

/// int_a^inf of the symm-gamma density, a > 0.
double vg_upper_tail(double gamma, double T, double a);

/// Poisson(mean) probabilities for n = 0, 1, ... truncated at the first n
/// with cumulative weight >= 1 - 1e-12.
std::vector<double> poisson_mixture_weights(double mean);

/// Upper tail of the standard normal, P(Z > z).
double normal_upper_tail(double z);

}  // namespace levysp::detail
