#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace velvetkit {

using Vec = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

// Real-input transforms (numpy-style conventions: irfft is the exact inverse
// of rfft, scaled so irfft(rfft(x), n) == x).
CVec rfft(const Vec& x);
Vec irfft(const CVec& spectrum, std::size_t n);

// Complex transforms; ifft carries the 1/n factor.
CVec fft(const CVec& x);
CVec ifft(const CVec& x);

// Linear convolution via a zero-padded transform; length |x|+|h|-1.
Vec fft_convolve(const Vec& x, const Vec& h);

// Same result as fft_convolve, computed in overlap-add blocks.
// block = 0 picks the smallest power of two >= 8*|h|.
Vec overlap_add_convolve(const Vec& x, const Vec& h, std::size_t block = 0);

std::size_t next_pow2(std::size_t n);

}  // namespace velvetkit
