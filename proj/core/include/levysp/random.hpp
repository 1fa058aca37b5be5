#pragma once

#include <cstdint>
#include <limits>

namespace levysp {

/// Purpose tag folded into stream keys so signal and noise draws of the same
/// realization never share a sub-stream.
enum class StreamTag : std::uint64_t { Increments = 1, Noise = 2, Calibration = 3 };

/// Counter-based SplitMix64 generator keyed by (seed, realization, node).
///
/// Every (key) triple addresses an independent sub-stream, so draws for a
/// given node do not depend on how many draws other nodes consumed or on
/// the order in which realizations are generated.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t realization, std::uint64_t node,
             StreamTag tag = StreamTag::Increments) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace levysp
