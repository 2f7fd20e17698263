#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tcofdm/dft.hpp"
#include "tcofdm/rng.hpp"
#include "tcofdm/signal.hpp"

namespace tcofdm {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// AWGN
// ---------------------------------------------------------------------------

struct AwgnConfig {
    double ebn0_db = 0.0;
    int bits_per_symbol = 2;    // R_m = log2(M)
    double code_rate = 0.25;    // R_c
    double symbol_energy = 1.0; // E_s
};

// Per-real-dimension noise variance:
// sigma^2 = E_s / (2 * R_m * R_c * 10^(EbN0/10)).
inline double noise_variance(const AwgnConfig& cfg) {
    const double ebn0 = std::pow(10.0, cfg.ebn0_db / 10.0);
    return cfg.symbol_energy / (2.0 * cfg.bits_per_symbol * cfg.code_rate * ebn0);
}

// y = x + n, independent Gaussian real/imag parts of variance sigma2 each.
inline ComplexFrame add_awgn(const ComplexFrame& signal, double sigma2, RngStream& rng) {
    if (sigma2 < 0.0)
        throw std::invalid_argument("add_awgn: negative variance");
    ComplexFrame out = signal;
    if (sigma2 == 0.0) return out;
    const double s = std::sqrt(sigma2);
    for (auto& v : out.samples) {
        const auto [g1, g2] = rng.gaussian_pair();
        v += cplx(s * g1, s * g2);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Phase noise
// ---------------------------------------------------------------------------

struct PhaseNoiseConfig {
    double level_dbc_hz = -50.0;  // single-sideband level at offset_hz
    double offset_hz = 100.0;
    double sample_rate_hz = 3.84e6;
};

namespace detail {

// Linear convolution via the transform, truncated to the first n outputs.
inline std::vector<double> fir_apply(const std::vector<double>& h,
                                     const std::vector<double>& w) {
    const std::size_t n = w.size();
    std::size_t m = 1;
    while (m < 2 * n) m <<= 1;
    ComplexFrame hf(m, Domain::time), wf(m, Domain::time);
    for (std::size_t i = 0; i < h.size(); ++i) hf[i] = h[i];
    for (std::size_t i = 0; i < n; ++i) wf[i] = w[i];
    const ComplexFrame H = dft(hf);
    const ComplexFrame W = dft(wf);
    ComplexFrame prod(m, Domain::frequency);
    for (std::size_t i = 0; i < m; ++i) prod[i] = H[i] * W[i];
    const ComplexFrame y = dft(prod, /*inverse=*/true);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i].real();
    return out;
}

}  // namespace detail

// 1/f-shaped random phase process (radians). White Gaussian noise is shaped
// by the Kasdin recursive filter h_0 = 1, h_k = h_{k-1} * (k - 1 + a/2) / k
// with a = 1, whose response gives a two-sided PSD of
// (1/fs) / (2 sin(pi f / fs)) for unit-variance input. The output is scaled
// so that PSD at offset_hz equals 10^(level_dbc_hz / 10), the Eq.-style
// dBc/Hz level in the small-angle regime.
inline std::vector<double> phase_noise_sequence(std::size_t n, const PhaseNoiseConfig& cfg,
                                                RngStream& rng) {
    if (n < 2)
        throw std::invalid_argument("phase_noise_sequence: need at least 2 samples");
    if (!(cfg.offset_hz > 0.0) || !(cfg.offset_hz < cfg.sample_rate_hz / 2.0))
        throw std::invalid_argument("phase_noise_sequence: offset must lie in (0, fs/2)");

    std::vector<double> h(n);
    h[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k)
        h[k] = h[k - 1] * (static_cast<double>(k) - 0.5) / static_cast<double>(k);

    std::vector<double> w(n);
    for (std::size_t i = 0; i + 1 < n; i += 2) {
        const auto [g1, g2] = rng.gaussian_pair();
        w[i] = g1;
        w[i + 1] = g2;
    }
    if (n % 2 == 1) w[n - 1] = rng.gaussian_pair().first;

    std::vector<double> y = detail::fir_apply(h, w);

    const double unit_psd =
        1.0 / (cfg.sample_rate_hz * 2.0 * std::sin(kPi * cfg.offset_hz / cfg.sample_rate_hz));
    const double target_psd = std::pow(10.0, cfg.level_dbc_hz / 10.0);
    const double scale = std::sqrt(target_psd / unit_psd);
    for (auto& v : y) v *= scale;
    return y;
}

// y_k = x_k * e^{i phase_k}; pure rotation, magnitudes unchanged.
inline ComplexFrame apply_phase_noise(const ComplexFrame& signal,
                                      const std::vector<double>& phase) {
    if (phase.size() < signal.size())
        throw std::invalid_argument("apply_phase_noise: phase sequence shorter than signal");
    ComplexFrame out = signal;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] *= cplx(std::cos(phase[i]), std::sin(phase[i]));
    return out;
}

// ---------------------------------------------------------------------------
// Doppler
// ---------------------------------------------------------------------------

// f_d = (f_carrier / 1080 MHz) * (speed / (km/h)) Hz.
inline double doppler_spread(double carrier_hz, double speed_kmh) {
    if (carrier_hz < 0.0 || speed_kmh < 0.0)
        throw std::invalid_argument("doppler_spread: negative input");
    return carrier_hz / 1.08e9 * speed_kmh;
}

inline double coherence_time(double doppler_hz) {
    if (!(doppler_hz > 0.0))
        throw std::invalid_argument("coherence_time: Doppler spread must be positive");
    return 1.0 / doppler_hz;
}

// ---------------------------------------------------------------------------
// Multipath fading
// ---------------------------------------------------------------------------

struct FadingTap {
    double delay_ns = 0.0;
    double power_db = 0.0;
};

struct FadingConfig {
    double k_factor = 0.0;       // rho^2 / (2 sigma^2); 0 means pure Rayleigh
    double max_doppler_hz = 0.0;
    std::vector<FadingTap> profile = {{0.0, 0.0}};
    double sample_rate_hz = 3.84e6;
    double static_phase_rad = 0.0;

    static std::vector<FadingTap> itu_pedestrian_a() {
        return {{0.0, 0.0}, {110.0, -9.7}, {190.0, -19.2}, {410.0, -22.8}};
    }
};

struct ChannelState {
    std::vector<std::vector<cplx>> tap_gains;  // [tap][sample]
    std::vector<int> tap_delays;               // samples
    std::vector<double> phase_trajectory;      // radians, filled by the harness
};

namespace detail {

// Band-limited complex Gaussian process with the flat Doppler spectrum
// S(f) = 1/(2 f_d) on |f| <= f_d and mean power `power`: draw an i.i.d.
// complex Gaussian spectrum on the band at the signal sample rate and
// inverse-transform. The grid is padded so the band resolves into enough
// bins for the spectral shape to hold.
inline std::vector<cplx> flat_doppler_process(double f_d, double power, std::size_t n,
                                              double sample_rate, RngStream& rng) {
    if (f_d == 0.0) {
        // static channel: one Rayleigh draw per realization
        const auto [g1, g2] = rng.gaussian_pair();
        const cplx g = std::sqrt(power / 2.0) * cplx(g1, g2);
        return std::vector<cplx>(n, g);
    }

    std::size_t m = 4096;
    while (m < n) m <<= 1;

    auto bin_freq = [&](std::size_t k) {
        return (k <= m / 2 ? static_cast<double>(k)
                           : static_cast<double>(k) - static_cast<double>(m)) *
               sample_rate / static_cast<double>(m);
    };

    ComplexFrame spec(m, Domain::frequency);
    std::size_t band_bins = 0;
    for (std::size_t k = 0; k < m; ++k)
        if (std::abs(bin_freq(k)) <= f_d) ++band_bins;
    const double amp =
        static_cast<double>(m) * std::sqrt(power / (2.0 * static_cast<double>(band_bins)));
    for (std::size_t k = 0; k < m; ++k) {
        if (std::abs(bin_freq(k)) <= f_d) {
            const auto [g1, g2] = rng.gaussian_pair();
            spec[k] = amp * cplx(g1, g2);
        }
    }
    const ComplexFrame series = dft(spec, /*inverse=*/true);
    return {series.samples.begin(), series.samples.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace detail

// Per-tap complex gain series. Tap powers are normalized so the total mean
// power gain is 0 dB. With K > 0 the first tap carries a deterministic
// line-of-sight component of fraction K/(K+1) of its power, the diffuse
// remainder 1/(K+1); K = 0 gives pure Rayleigh on every tap.
inline ChannelState generate_tap_gains(const FadingConfig& cfg, std::size_t n, RngStream& rng) {
    if (n < 2)
        throw std::invalid_argument("generate_tap_gains: need at least 2 samples");
    if (cfg.max_doppler_hz >= cfg.sample_rate_hz / 2.0)
        throw std::invalid_argument("generate_tap_gains: Doppler spread at or above Nyquist");
    if (cfg.profile.empty())
        throw std::invalid_argument("generate_tap_gains: empty tap profile");
    if (cfg.k_factor < 0.0)
        throw std::invalid_argument("generate_tap_gains: negative K-factor");

    double total = 0.0;
    for (const auto& tap : cfg.profile) total += std::pow(10.0, tap.power_db / 10.0);

    ChannelState state;
    state.tap_gains.resize(cfg.profile.size());
    state.tap_delays.resize(cfg.profile.size());
    for (std::size_t p = 0; p < cfg.profile.size(); ++p) {
        const double power = std::pow(10.0, cfg.profile[p].power_db / 10.0) / total;
        state.tap_delays[p] = static_cast<int>(
            std::lround(cfg.profile[p].delay_ns * 1e-9 * cfg.sample_rate_hz));
        const bool los_tap = p == 0 && cfg.k_factor > 0.0;
        const double diffuse_power = los_tap ? power / (cfg.k_factor + 1.0) : power;
        state.tap_gains[p] = detail::flat_doppler_process(cfg.max_doppler_hz, diffuse_power,
                                                          n, cfg.sample_rate_hz, rng);
        if (los_tap) {
            const double los = std::sqrt(power * cfg.k_factor / (cfg.k_factor + 1.0));
            for (auto& g : state.tap_gains[p]) g += los;
        }
    }
    return state;
}

// Tapped delay line with time-varying gains: y_k = sum_p g_{p,k} x_{k - d_p};
// samples before the start of the signal read as zero.
inline ComplexFrame multipath_apply(const ComplexFrame& signal, const ChannelState& state,
                                    const FadingConfig& cfg) {
    (void)cfg;
    const std::size_t n = signal.size();
    for (const auto& gains : state.tap_gains)
        if (gains.size() < n)
            throw std::invalid_argument("multipath_apply: channel state shorter than signal");
    ComplexFrame out(n, Domain::time);
    for (std::size_t p = 0; p < state.tap_gains.size(); ++p) {
        const int d = state.tap_delays[p];
        const auto& gains = state.tap_gains[p];
        for (std::size_t k = d >= 0 ? static_cast<std::size_t>(d) : 0; k < n; ++k)
            out[k] += gains[k] * signal[k - static_cast<std::size_t>(d)];
    }
    return out;
}

// Receiver-side "perfect angle estimation": keep the faded magnitude, restore
// the original angle. A zero original sample contributes angle 0.
inline ComplexFrame perfect_phase_recovery(const ComplexFrame& faded,
                                           const ComplexFrame& original) {
    if (faded.size() != original.size())
        throw std::invalid_argument("perfect_phase_recovery: length mismatch");
    ComplexFrame out(faded.size(), Domain::time);
    for (std::size_t k = 0; k < faded.size(); ++k) {
        const double mag = std::abs(faded[k]);
        const cplx& ref = original[k];
        if (ref == cplx(0.0, 0.0)) {
            out[k] = cplx(mag, 0.0);
        } else {
            out[k] = mag / std::abs(ref) * ref;
        }
    }
    return out;
}

// Flat single-tap Rayleigh fading composed with a fixed phase rotation:
// y_k = g_k * x_k * e^{i angle}.
inline ComplexFrame static_phase_rayleigh(const ComplexFrame& signal, double angle_rad,
                                          const ChannelState& state) {
    if (state.tap_gains.size() != 1)
        throw std::invalid_argument("static_phase_rayleigh: expects a single-tap state");
    const auto& gains = state.tap_gains[0];
    if (gains.size() < signal.size())
        throw std::invalid_argument("static_phase_rayleigh: channel state shorter than signal");
    const cplx rot(std::cos(angle_rad), std::sin(angle_rad));
    ComplexFrame out = signal;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= gains[k] * rot;
    return out;
}

}  // namespace tcofdm
