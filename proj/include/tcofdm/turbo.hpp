#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcofdm/fec.hpp"
#include "tcofdm/signal.hpp"

namespace tcofdm {

// Log-likelihood ratios in natural-log units; positive favors bit 1.
using LlrBlock = std::vector<double>;

// Exact log-domain sum: max*(x,y) = max(x,y) + log(1 + e^-|y-x|) = log(e^x + e^y).
inline double max_star(double x, double y) {
    const double m = x > y ? x : y;
    return m + std::log1p(std::exp(-std::abs(x - y)));
}

// Saturation bound applied to LLRs before they enter the recursions; beyond
// this the decisions are numerically settled anyway.
inline constexpr double kLlrClamp = 50.0;

inline double clamp_llr(double v) {
    return std::clamp(v, -kLlrClamp, kLlrClamp);
}

struct AppResult {
    LlrBlock posterior;
    LlrBlock extrinsic;  // posterior - systematic - apriori
};

// A-posteriori probability (BCJR) decoding of one constituent code in the
// log domain, with max* as the accumulation operator. The forward recursion
// starts from the known all-zero state; the backward recursion starts uniform
// over states because the trellis is unterminated.
inline AppResult app_decode(const LlrBlock& sys, const LlrBlock& parity,
                            const LlrBlock& apriori, const Trellis& trellis) {
    const std::size_t n = sys.size();
    if (parity.size() != n || apriori.size() != n)
        throw std::invalid_argument("app_decode: block length mismatch");
    if (n == 0)
        throw std::invalid_argument("app_decode: empty block");

    const int S = trellis.n_states;
    constexpr double kNegLarge = -1e30;

    // Branch metric for (state s, input d): d*(Ls + La) + q(s,d)*Lp.
    // The per-step constants that complete log P(bit) cancel in the LLR.
    std::vector<double> alpha(static_cast<std::size_t>(S) * (n + 1), kNegLarge);
    std::vector<double> beta(static_cast<std::size_t>(S) * (n + 1), 0.0);
    alpha[0] = 0.0;

    auto gamma = [&](std::size_t k, int s, int d) {
        const double in = d ? clamp_llr(sys[k]) + clamp_llr(apriori[k]) : 0.0;
        const double par = trellis.parity[s][d] ? clamp_llr(parity[k]) : 0.0;
        return in + par;
    };

    for (std::size_t k = 0; k < n; ++k) {
        double* a = &alpha[k * S];
        double* a_next = &alpha[(k + 1) * S];
        for (int s = 0; s < S; ++s) {
            for (int d = 0; d < 2; ++d) {
                const int ns = trellis.next_state[s][d];
                const double cand = a[s] + gamma(k, s, d);
                a_next[ns] = a_next[ns] <= kNegLarge ? cand : max_star(a_next[ns], cand);
            }
        }
        const double norm = *std::max_element(a_next, a_next + S);
        for (int s = 0; s < S; ++s) a_next[s] -= norm;
    }

    for (std::size_t k = n; k-- > 0;) {
        double* b = &beta[k * S];
        const double* b_next = &beta[(k + 1) * S];
        for (int s = 0; s < S; ++s) {
            const double m0 = b_next[trellis.next_state[s][0]] + gamma(k, s, 0);
            const double m1 = b_next[trellis.next_state[s][1]] + gamma(k, s, 1);
            b[s] = max_star(m0, m1);
        }
        const double norm = *std::max_element(b, b + S);
        for (int s = 0; s < S; ++s) b[s] -= norm;
    }

    AppResult res;
    res.posterior.resize(n);
    res.extrinsic.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double* a = &alpha[k * S];
        const double* b_next = &beta[(k + 1) * S];
        double num = kNegLarge, den = kNegLarge;
        for (int s = 0; s < S; ++s) {
            const double m1 = a[s] + gamma(k, s, 1) + b_next[trellis.next_state[s][1]];
            const double m0 = a[s] + gamma(k, s, 0) + b_next[trellis.next_state[s][0]];
            num = s == 0 ? m1 : max_star(num, m1);
            den = s == 0 ? m0 : max_star(den, m0);
        }
        res.posterior[k] = num - den;
        res.extrinsic[k] = res.posterior[k] - sys[k] - apriori[k];
    }
    return res;
}

// Channel reliability scaling for a unit-amplitude bipolar signal in
// Gaussian noise: LLR = (2 / noise variance) * sample.
inline LlrBlock scale_received(const std::vector<double>& bipolar, double noise_variance) {
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("scale_received: noise variance must be positive");
    LlrBlock out(bipolar.size());
    const double gain = 2.0 / noise_variance;
    for (std::size_t i = 0; i < bipolar.size(); ++i) out[i] = gain * bipolar[i];
    return out;
}

// Demultiplexed channel LLRs for one codeword. Each parity block is in its
// own constituent's trellis order (parity2 in il1 order, parity3 in il2
// order), exactly as the encoder produced them.
struct DecoderInput {
    LlrBlock systematic;
    std::array<LlrBlock, 3> parity;
    const Interleaver* il1 = nullptr;
    const Interleaver* il2 = nullptr;
};

namespace detail {

inline void validate(const DecoderInput& in) {
    const std::size_t n = in.systematic.size();
    if (n == 0) throw std::invalid_argument("turbo_decode: empty block");
    for (const auto& p : in.parity)
        if (p.size() != n) throw std::invalid_argument("turbo_decode: block length mismatch");
    if (!in.il1 || !in.il2 || in.il1->size() != n || in.il2->size() != n)
        throw std::invalid_argument("turbo_decode: interleaver length mismatch");
}

inline LlrBlock clamped(const LlrBlock& v) {
    LlrBlock out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = clamp_llr(v[i]);
    return out;
}

}  // namespace detail

// Iterative three-decoder loop. Per pass: DEC1 runs in natural order with the
// fed-back extrinsic of DEC3 as a-priori (zero on the first pass), DEC2 in il1
// order, DEC3 in il2 order; DEC2's extrinsic is re-mapped il1 -> il2 for DEC3,
// and DEC3's extrinsic is deinterleaved back to natural order for DEC1.
// Returns the hard decision on DEC3's posterior after each pass, mapped back
// to natural order (LLR > 0 decodes to 1; an exact tie decodes to 0).
inline std::vector<BitBlock> turbo_decode_iterations(const DecoderInput& input,
                                                     int iterations,
                                                     const Trellis& trellis) {
    if (iterations < 1)
        throw std::invalid_argument("turbo_decode: iterations must be >= 1");
    detail::validate(input);

    const std::size_t n = input.systematic.size();
    const Interleaver& il1 = *input.il1;
    const Interleaver& il2 = *input.il2;

    const LlrBlock sys = detail::clamped(input.systematic);
    const LlrBlock par1 = detail::clamped(input.parity[0]);
    const LlrBlock par2 = detail::clamped(input.parity[1]);
    const LlrBlock par3 = detail::clamped(input.parity[2]);
    const LlrBlock sys_il1 = il1.interleave(sys);
    const LlrBlock sys_il2 = il2.interleave(sys);

    std::vector<BitBlock> decisions;
    decisions.reserve(static_cast<std::size_t>(iterations));
    LlrBlock feedback(n, 0.0);  // DEC3 extrinsic in natural order

    for (int it = 0; it < iterations; ++it) {
        const AppResult dec1 = app_decode(sys, par1, feedback, trellis);
        const LlrBlock apr2 = il1.interleave(detail::clamped(dec1.extrinsic));

        const AppResult dec2 = app_decode(sys_il1, par2, apr2, trellis);
        const LlrBlock ext2_nat = il1.deinterleave(detail::clamped(dec2.extrinsic));
        const LlrBlock apr3 = il2.interleave(ext2_nat);

        const AppResult dec3 = app_decode(sys_il2, par3, apr3, trellis);
        feedback = il2.deinterleave(detail::clamped(dec3.extrinsic));

        const LlrBlock post_nat = il2.deinterleave(dec3.posterior);
        BitBlock bits(n);
        for (std::size_t i = 0; i < n; ++i) bits[i] = post_nat[i] > 0.0 ? 1 : 0;
        decisions.push_back(std::move(bits));
    }
    return decisions;
}

inline BitBlock turbo_decode(const DecoderInput& input, int iterations,
                             const Trellis& trellis) {
    return turbo_decode_iterations(input, iterations, trellis).back();
}

}  // namespace tcofdm
