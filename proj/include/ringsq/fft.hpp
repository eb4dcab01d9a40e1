#pragma once

#include <complex>
#include <vector>

namespace ringsq {

// In-place radix-2 FFT, x.size() must be a power of two.
// sign = +1: X_k = sum_j x_j e^{+2 pi i jk/n}; sign = -1 the conjugate.
// No 1/n normalization; callers own the convention.
void fft_pow2(std::vector<std::complex<double>>& x, int sign);

bool is_pow2(size_t n);

}  // namespace ringsq
