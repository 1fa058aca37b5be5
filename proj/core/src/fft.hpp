#pragma once

#include <complex>
#include <span>

namespace levysp::detail {

using Complex = std::complex<double>;

/// In-place unnormalized DFT: sign -1 computes sum x_k exp(-2 pi i jk/n),
/// sign +1 the conjugate transform. Plans are cached per (n, sign); safe to
/// call from several threads.
void fft_inplace(std::span<Complex> data, int sign);

}  // namespace levysp::detail
