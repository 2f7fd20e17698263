#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tcofdm/signal.hpp"

namespace tcofdm {

namespace detail {

// In-place radix-2 decimation-in-time transform. sign = -1 forward, +1 inverse.
inline void fft_radix2(std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();

    // bit-reversal reordering
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    const double pi = 3.141592653589793238462643383279502884;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = x[i + k];
                const cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

}  // namespace detail

// Discrete Fourier transform, radix-2 only. The forward transform is
// unscaled; the inverse divides by the length, so inverse(forward(x)) == x.
inline ComplexFrame dft(const ComplexFrame& frame, bool inverse = false) {
    const std::size_t n = frame.size();
    if (n < 2 || !is_power_of_two(n))
        throw std::invalid_argument("dft: frame length must be a power of two, >= 2");

    ComplexFrame out(frame.samples, inverse ? Domain::time : Domain::frequency);
    detail::fft_radix2(out.samples, inverse ? +1 : -1);
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : out.samples) v *= scale;
    }
    return out;
}

}  // namespace tcofdm
