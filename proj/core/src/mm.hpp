#pragma once

#include <functional>

#include "levysp/estimators.hpp"

namespace levysp::detail {

/// Majorize-minimize for sum_obs (s - y)^2 + sum_k phi(s[k] - s[k-1]) with
/// even phi whose half-quadratic weight phi'(d) / (2 d) is supplied as
/// `weight`. Each step is backtracked so the cost never increases.
DenoiseResult majorize_minimize(const Observations& obs, std::vector<double> init,
                                const std::function<double(double)>& phi,
                                const std::function<double(double)>& weight,
                                const MmOptions& options);

}  // namespace levysp::detail
