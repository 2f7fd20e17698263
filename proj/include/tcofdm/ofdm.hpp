#pragma once

#include <stdexcept>

#include "tcofdm/dft.hpp"
#include "tcofdm/signal.hpp"

namespace tcofdm {

// Carrier layout: 75% of the transform length carries data, 25% is the zero
// pad occupying the spectrum center (Nyquist region), and the cyclic prefix
// copies the last 25% of the time-domain symbol.
struct OfdmGeometry {
    int fft_length = 2048;
    int data_carriers = 1536;
    int pad_carriers = 512;
    int cp_length = 512;

    static OfdmGeometry from_fft_length(int n) {
        if (n < 8 || !is_power_of_two(static_cast<std::size_t>(n)))
            throw std::invalid_argument("OfdmGeometry: fft length must be a power of two, >= 8");
        OfdmGeometry g;
        g.fft_length = n;
        g.pad_carriers = n / 4;
        g.data_carriers = n - g.pad_carriers;
        g.cp_length = n / 4;
        return g;
    }

    // time-domain samples per OFDM symbol, prefix included
    int symbol_length() const { return fft_length + cp_length; }
};

// Split the data block around a centered zero region: the first half of the
// data occupies the low bins, zeros fill [D/2, D/2+P), and the second half
// follows. This is the pre-IFFT frame layout with padding moved to the
// middle of the subcarriers.
inline ComplexFrame frame_transform(const ComplexFrame& data, const OfdmGeometry& g) {
    const auto d = static_cast<std::size_t>(g.data_carriers);
    if (data.size() != d)
        throw std::invalid_argument("frame_transform: expected data_carriers samples");
    ComplexFrame out(static_cast<std::size_t>(g.fft_length), Domain::frequency);
    const std::size_t half = d / 2;
    const auto pad = static_cast<std::size_t>(g.pad_carriers);
    for (std::size_t i = 0; i < half; ++i) out[i] = data[i];
    for (std::size_t i = half; i < d; ++i) out[i + pad] = data[i];
    return out;
}

inline ComplexFrame inverse_frame_transform(const ComplexFrame& frame, const OfdmGeometry& g) {
    if (frame.size() != static_cast<std::size_t>(g.fft_length))
        throw std::invalid_argument("inverse_frame_transform: expected fft_length samples");
    const auto d = static_cast<std::size_t>(g.data_carriers);
    const std::size_t half = d / 2;
    const auto pad = static_cast<std::size_t>(g.pad_carriers);
    ComplexFrame out(d, Domain::frequency);
    for (std::size_t i = 0; i < half; ++i) out[i] = frame[i];
    for (std::size_t i = half; i < d; ++i) out[i] = frame[i + pad];
    return out;
}

inline ComplexFrame add_cyclic_prefix(const ComplexFrame& time, const OfdmGeometry& g) {
    const auto n = static_cast<std::size_t>(g.fft_length);
    if (time.size() != n)
        throw std::invalid_argument("add_cyclic_prefix: expected fft_length samples");
    const auto cp = static_cast<std::size_t>(g.cp_length);
    ComplexFrame out(n + cp, Domain::time);
    for (std::size_t i = 0; i < cp; ++i) out[i] = time[n - cp + i];
    for (std::size_t i = 0; i < n; ++i) out[cp + i] = time[i];
    return out;
}

inline ComplexFrame remove_cyclic_prefix(const ComplexFrame& time, const OfdmGeometry& g) {
    const auto n = static_cast<std::size_t>(g.fft_length);
    const auto cp = static_cast<std::size_t>(g.cp_length);
    if (time.size() != n + cp)
        throw std::invalid_argument("remove_cyclic_prefix: expected fft_length + cp samples");
    ComplexFrame out(n, Domain::time);
    for (std::size_t i = 0; i < n; ++i) out[i] = time[cp + i];
    return out;
}

// PAD, frame transform, IFFT (scaled by 1/N), cyclic prefix.
inline ComplexFrame ofdm_modulate(const ComplexFrame& data, const OfdmGeometry& g) {
    return add_cyclic_prefix(dft(frame_transform(data, g), /*inverse=*/true), g);
}

// Remove CP, FFT (unscaled), remove pad.
inline ComplexFrame ofdm_demodulate(const ComplexFrame& time, const OfdmGeometry& g) {
    return inverse_frame_transform(dft(remove_cyclic_prefix(time, g)), g);
}

}  // namespace tcofdm
