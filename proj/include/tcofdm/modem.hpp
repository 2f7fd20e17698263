#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "tcofdm/signal.hpp"

namespace tcofdm {

// Gray-ordered QPSK on the pi/4-offset constellation e^{i(pi/4 + k*pi/2)}.
// Bit pair (b1,b0), first bit high: 00 -> e^{i pi/4}, 01 -> e^{i 3pi/4},
// 11 -> e^{i 5pi/4}, 10 -> e^{i 7pi/4}. Symbol energy is 1.
namespace qpsk {

inline constexpr double kHalfSqrt2 = 0.70710678118654752440;

inline const std::array<cplx, 4>& constellation() {
    static const std::array<cplx, 4> pts = {
        cplx(+kHalfSqrt2, +kHalfSqrt2),   // 00
        cplx(-kHalfSqrt2, +kHalfSqrt2),   // 01
        cplx(-kHalfSqrt2, -kHalfSqrt2),   // 11
        cplx(+kHalfSqrt2, -kHalfSqrt2),   // 10
    };
    return pts;
}

}  // namespace qpsk

inline std::vector<cplx> qpsk_modulate(const BitBlock& bits) {
    if (bits.size() % 2 != 0)
        throw std::invalid_argument("qpsk_modulate: bit count must be even");
    // Gray index around the circle: 00,01,11,10 -> k = 0,1,2,3.
    static constexpr int gray_pos[4] = {0, 1, 3, 2};  // indexed by (b1<<1)|b0
    std::vector<cplx> out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int label = ((bits[2 * i] & 1) << 1) | (bits[2 * i + 1] & 1);
        out[i] = qpsk::constellation()[gray_pos[label]];
    }
    return out;
}

// Nearest-point decision; with this labeling it reduces to the component
// signs: b1 = (Im < 0), b0 = (Re < 0). Boundary samples (a zero component)
// therefore resolve toward the smaller Gray label.
inline BitBlock qpsk_demodulate_hard(const std::vector<cplx>& symbols) {
    BitBlock out(2 * symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        out[2 * i] = symbols[i].imag() < 0.0 ? 1 : 0;
        out[2 * i + 1] = symbols[i].real() < 0.0 ? 1 : 0;
    }
    return out;
}

// Unipolar to bipolar: 0 -> -1, 1 -> +1.
inline std::vector<double> to_bipolar(const BitBlock& bits) {
    std::vector<double> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] ? 1.0 : -1.0;
    return out;
}

}  // namespace tcofdm
