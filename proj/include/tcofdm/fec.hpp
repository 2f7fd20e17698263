#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tcofdm/rng.hpp"
#include "tcofdm/signal.hpp"

namespace tcofdm {

// State-transition table of a recursive systematic convolutional encoder.
// Polynomials are given in octal; bit 0 taps the input/feedback sum, bit k
// (k >= 1) taps shift register k-1 (register 0 holds the newest bit).
struct Trellis {
    int memory = 0;
    int constraint_length = 0;
    int n_states = 0;
    std::uint32_t feedback_octal = 0;
    std::uint32_t feedforward_octal = 0;
    std::vector<std::array<std::uint8_t, 2>> next_state;  // [state][input]
    std::vector<std::array<std::uint8_t, 2>> parity;      // [state][input]

    static Trellis rsc(std::uint32_t feedback = 07, std::uint32_t feedforward = 05,
                       int memory = 2) {
        Trellis t;
        t.memory = memory;
        t.constraint_length = memory + 1;
        t.n_states = 1 << memory;
        t.feedback_octal = feedback;
        t.feedforward_octal = feedforward;
        t.next_state.resize(t.n_states);
        t.parity.resize(t.n_states);
        const std::uint32_t fb_taps = feedback >> 1;
        const std::uint32_t ff_taps = feedforward >> 1;
        const std::uint32_t mask = static_cast<std::uint32_t>(t.n_states - 1);
        for (int s = 0; s < t.n_states; ++s) {
            for (int d = 0; d < 2; ++d) {
                const std::uint32_t a =
                    (static_cast<std::uint32_t>(d) ^ parity_of(static_cast<std::uint32_t>(s) & fb_taps)) & 1u;
                const std::uint32_t p =
                    ((feedforward & 1u) * a) ^ parity_of(static_cast<std::uint32_t>(s) & ff_taps);
                t.next_state[s][d] = static_cast<std::uint8_t>(((static_cast<std::uint32_t>(s) << 1) | a) & mask);
                t.parity[s][d] = static_cast<std::uint8_t>(p & 1u);
            }
        }
        return t;
    }

private:
    static std::uint32_t parity_of(std::uint32_t v) {
        v ^= v >> 16;
        v ^= v >> 8;
        v ^= v >> 4;
        v ^= v >> 2;
        v ^= v >> 1;
        return v & 1u;
    }
};

// Bijective permutation on [0, length). interleave gathers (out[i] = in[p[i]]),
// deinterleave scatters, so deinterleave(interleave(x)) == x.
class Interleaver {
public:
    explicit Interleaver(std::vector<std::uint32_t> permutation)
        : perm_(std::move(permutation)) {}

    // Uniformly random permutation, Fisher-Yates from the stream.
    static Interleaver random(std::size_t length, RngStream& rng) {
        if (length < 2)
            throw std::invalid_argument("Interleaver: length must be >= 2");
        std::vector<std::uint32_t> p(length);
        for (std::size_t i = 0; i < length; ++i) p[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = length - 1; i > 0; --i) {
            const std::uint32_t j = rng.next_below(static_cast<std::uint32_t>(i + 1));
            std::swap(p[i], p[j]);
        }
        return Interleaver(std::move(p));
    }

    std::size_t size() const { return perm_.size(); }
    const std::vector<std::uint32_t>& permutation() const { return perm_; }

    template <typename T>
    std::vector<T> interleave(const std::vector<T>& in) const {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[perm_[i]];
        return out;
    }

    template <typename T>
    std::vector<T> deinterleave(const std::vector<T>& in) const {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[perm_[i]] = in[i];
        return out;
    }

    bool operator==(const Interleaver& other) const { return perm_ == other.perm_; }

private:
    void check(std::size_t n) const {
        if (n != perm_.size())
            throw std::invalid_argument("Interleaver: block length mismatch");
    }
    std::vector<std::uint32_t> perm_;
};

struct RscOutput {
    BitBlock systematic;
    BitBlock parity;
};

// Run the recursive systematic encoder from the all-zero state. The encoder
// is left in whatever state the data drives it to; no termination bits.
inline RscOutput rsc_encode(const BitBlock& bits, const Trellis& trellis) {
    if (bits.empty())
        throw std::invalid_argument("rsc_encode: empty block");
    RscOutput out;
    out.systematic = bits;
    out.parity.resize(bits.size());
    std::uint8_t state = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        const int d = bits[k] & 1;
        out.parity[k] = trellis.parity[state][d];
        state = trellis.next_state[state][d];
    }
    return out;
}

struct PcccCodeword {
    BitBlock systematic;
    BitBlock parity1;
    BitBlock parity2;
    BitBlock parity3;
    BitBlock multiplexed;  // per info bit i: [sys_i, p1_i, p2_i, p3_i]
};

// Three-branch parallel concatenation: one encoder sees the data, the other
// two see its interleaved versions. Overall rate 1/4.
inline PcccCodeword pccc_encode(const BitBlock& bits, const Trellis& trellis,
                                const Interleaver& il1, const Interleaver& il2) {
    if (il1.size() != bits.size() || il2.size() != bits.size())
        throw std::invalid_argument("pccc_encode: interleaver length mismatch");
    PcccCodeword cw;
    cw.systematic = bits;
    cw.parity1 = rsc_encode(bits, trellis).parity;
    cw.parity2 = rsc_encode(il1.interleave(bits), trellis).parity;
    cw.parity3 = rsc_encode(il2.interleave(bits), trellis).parity;
    cw.multiplexed.resize(4 * bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        cw.multiplexed[4 * i + 0] = cw.systematic[i];
        cw.multiplexed[4 * i + 1] = cw.parity1[i];
        cw.multiplexed[4 * i + 2] = cw.parity2[i];
        cw.multiplexed[4 * i + 3] = cw.parity3[i];
    }
    return cw;
}

}  // namespace tcofdm
