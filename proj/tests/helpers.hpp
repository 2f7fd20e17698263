#pragma once

// Test-side oracles, kept independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

// --- (7,5) recursive systematic encoder, direct shift-register simulation ---
// Feedback 7 (a = d ^ s0 ^ s1), feedforward 5 (p = a ^ s1), register 0 newest.
inline std::vector<std::uint8_t> rsc_parity_75(const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> parity(bits.size());
    int s0 = 0, s1 = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        const int d = bits[k] & 1;
        const int a = d ^ s0 ^ s1;
        parity[k] = static_cast<std::uint8_t>(a ^ s1);
        s1 = s0;
        s0 = a;
    }
    return parity;
}

inline double logaddexp(double a, double b) {
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Exhaustive MAP bit posteriors for the (7,5) code: enumerate every message,
// score it by sum_k [ d_k (sys_k + apr_k) + p_k par_k ], and marginalize.
// The final encoder state is unconstrained (unterminated trellis).
inline std::vector<double> map_posteriors_75(const std::vector<double>& sys,
                                             const std::vector<double>& par,
                                             const std::vector<double>& apr) {
    const std::size_t n = sys.size();
    const double neg = -1e300;
    std::vector<double> num(n, neg), den(n, neg);
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        std::vector<std::uint8_t> bits(n);
        for (std::size_t k = 0; k < n; ++k) bits[k] = (m >> k) & 1u;
        const std::vector<std::uint8_t> parity = rsc_parity_75(bits);
        double score = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (bits[k]) score += sys[k] + apr[k];
            if (parity[k]) score += par[k];
        }
        for (std::size_t k = 0; k < n; ++k) {
            double& slot = bits[k] ? num[k] : den[k];
            slot = slot <= neg ? score : logaddexp(slot, score);
        }
    }
    std::vector<double> llr(n);
    for (std::size_t k = 0; k < n; ++k) llr[k] = num[k] - den[k];
    return llr;
}

// --- naive O(N^2) discrete Fourier transform ---
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x,
                                                   bool inverse = false) {
    const std::size_t n = x.size();
    const double sign = inverse ? +1.0 : -1.0;
    const double pi = 3.141592653589793238462643383279502884;
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += x[j] * std::polar(1.0, sign * 2.0 * pi * static_cast<double>(k * j) /
                                              static_cast<double>(n));
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

// --- two-sided PSD at one frequency by direct correlation (rectangular window) ---
inline double psd_at(const std::vector<double>& x, double fs, double freq) {
    const double pi = 3.141592653589793238462643383279502884;
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += x[i] * std::polar(1.0, -2.0 * pi * freq * static_cast<double>(i) / fs);
    return std::norm(acc) / (fs * static_cast<double>(x.size()));
}

// --- Kolmogorov-Smirnov distance against a CDF ---
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double c = cdf(samples[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(c - static_cast<double>(i + 1) / n));
    }
    return d;
}

// Rayleigh CDF with unit mean square (sigma^2 = 1/2 per component).
inline double rayleigh_cdf_unit_power(double a) {
    return a <= 0.0 ? 0.0 : 1.0 - std::exp(-a * a);
}

// Gray-QPSK-over-AWGN bit error probability, (1/2) erfc(sqrt(Eb/N0)).
inline double qpsk_ber_theory(double ebn0_db) {
    return 0.5 * std::erfc(std::sqrt(std::pow(10.0, ebn0_db / 10.0)));
}

}  // namespace oracle
