#include <array>
#include <string>

#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"

namespace levysp {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 5> kMethodNames{{
    {Method::Lmmse, "lmmse"},
    {Method::Tv, "tv"},
    {Method::Log, "log"},
    {Method::Map, "map"},
    {Method::Mmse, "mmse"},
}};

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  throw ConfigError("method", "unknown method '" + std::string(name) + "' (expected lmmse, tv, log, map or mmse)");
}

bool is_variational(Method method) noexcept {
  return method == Method::Lmmse || method == Method::Tv || method == Method::Log;
}

DenoiseResult denoise(const Observations& obs, const EstimatorConfig& config,
                      const std::optional<InnovationSpec>& spec, double T) {
  auto need_spec = [&]() -> const InnovationSpec& {
    if (!spec) throw ArgumentError(std::string(to_string(config.method)) + " needs an innovation spec");
    return *spec;
  };
  switch (config.method) {
    case Method::Lmmse:
      return lmmse_denoise(obs, config.reg_weight);
    case Method::Tv:
      return tv_denoise(obs, config.reg_weight);
    case Method::Log:
      return log_denoise(obs, config.reg_weight, config.epsilon, config.mm);
    case Method::Map:
      return map_denoise(obs, need_spec(), T, config.mm);
    case Method::Mmse:
      if (obs.noise_variance == 0.0) return mmse_interpolate(obs, need_spec(), T, config.grid);
      return mmse_denoise(obs, need_spec(), T, config.grid);
  }
  throw ArgumentError("unknown method");
}

}  // namespace levysp
