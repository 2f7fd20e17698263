#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "tcofdm/channel.hpp"
#include "tcofdm/fec.hpp"
#include "tcofdm/modem.hpp"
#include "tcofdm/rng.hpp"
#include "tcofdm/turbo.hpp"

using tcofdm::app_decode;
using tcofdm::BitBlock;
using tcofdm::DecoderInput;
using tcofdm::Interleaver;
using tcofdm::LlrBlock;
using tcofdm::max_star;
using tcofdm::pccc_encode;
using tcofdm::RngStream;
using tcofdm::scale_received;
using tcofdm::Trellis;
using tcofdm::turbo_decode;
using tcofdm::turbo_decode_iterations;

TEST_CASE("max_star closed-form values") {
    REQUIRE(max_star(0.0, 0.0) == Catch::Approx(std::log(2.0)).epsilon(1e-12));
    REQUIRE(max_star(5.0, 0.0) == Catch::Approx(5.0 + std::log1p(std::exp(-5.0))).epsilon(1e-12));
    REQUIRE(max_star(5.0, 0.0) == Catch::Approx(5.0067153).epsilon(1e-6));
}

TEST_CASE("max_star is symmetric and equals log(e^x + e^y)") {
    RngStream rng(31, 0);
    for (int i = 0; i < 2000; ++i) {
        const double x = (rng.next_unit() - 0.5) * 60.0;
        const double y = (rng.next_unit() - 0.5) * 60.0;
        REQUIRE(max_star(x, y) == max_star(y, x));
        const double exact = std::log(std::exp(x) + std::exp(y));
        REQUIRE(std::abs(max_star(x, y) - exact) < 1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("no evidence gives a zero posterior") {
    const Trellis t = Trellis::rsc();
    const LlrBlock zero(16, 0.0);
    const auto res = app_decode(zero, zero, zero, t);
    for (double v : res.posterior) REQUIRE(std::abs(v) < 1e-12);
    for (double v : res.extrinsic) REQUIRE(std::abs(v) < 1e-12);
}

TEST_CASE("posteriors match exhaustive MAP enumeration") {
    const Trellis t = Trellis::rsc();
    RngStream rng(32, 0);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u}) {
        for (int trial = 0; trial < 20; ++trial) {
            LlrBlock sys(n), par(n), apr(n);
            for (std::size_t k = 0; k < n; ++k) {
                sys[k] = (rng.next_unit() - 0.5) * 8.0;
                par[k] = (rng.next_unit() - 0.5) * 8.0;
                apr[k] = (rng.next_unit() - 0.5) * 4.0;
            }
            const auto res = app_decode(sys, par, apr, t);
            const auto expect = oracle::map_posteriors_75(sys, par, apr);
            for (std::size_t k = 0; k < n; ++k)
                REQUIRE(std::abs(res.posterior[k] - expect[k]) < 1e-9);
        }
    }
}

TEST_CASE("overwhelming systematic evidence dominates the posterior") {
    const Trellis t = Trellis::rsc();
    const std::size_t n = 24;
    const LlrBlock sys(n, 20.0), zero(n, 0.0);
    const auto res = app_decode(sys, zero, zero, t);
    for (double v : res.posterior) REQUIRE(v > 19.0);
}

TEST_CASE("posterior decomposes into sys + apriori + extrinsic") {
    const Trellis t = Trellis::rsc();
    RngStream rng(33, 0);
    const std::size_t n = 40;
    LlrBlock sys(n), par(n), apr(n);
    for (std::size_t k = 0; k < n; ++k) {
        sys[k] = (rng.next_unit() - 0.5) * 10.0;
        par[k] = (rng.next_unit() - 0.5) * 10.0;
        apr[k] = (rng.next_unit() - 0.5) * 6.0;
    }
    const auto res = app_decode(sys, par, apr, t);
    for (std::size_t k = 0; k < n; ++k) {
        REQUIRE(res.extrinsic[k] == res.posterior[k] - sys[k] - apr[k]);
        REQUIRE(res.posterior[k] ==
                Catch::Approx(sys[k] + apr[k] + res.extrinsic[k]).margin(1e-12));
    }
}

TEST_CASE("app_decode rejects mismatched lengths") {
    const Trellis t = Trellis::rsc();
    REQUIRE_THROWS_AS(app_decode(LlrBlock(4), LlrBlock(5), LlrBlock(4), t),
                      std::invalid_argument);
}

TEST_CASE("scale_received applies 2/variance") {
    REQUIRE(scale_received({1.0}, 0.5)[0] == Catch::Approx(4.0));
    REQUIRE(scale_received({0.0}, 0.3)[0] == 0.0);
    REQUIRE(scale_received({-0.75}, 0.75)[0] == Catch::Approx(-2.0));
    REQUIRE_THROWS_AS(scale_received({1.0}, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(scale_received({1.0}, -1.0), std::invalid_argument);
}

namespace {

struct CodePair {
    Interleaver il1;
    Interleaver il2;
};

CodePair make_interleavers(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    Interleaver il1 = Interleaver::random(n, rng);
    Interleaver il2 = Interleaver::random(n, rng);
    return {std::move(il1), std::move(il2)};
}

DecoderInput make_input(const LlrBlock& llr4, const CodePair& pair) {
    const std::size_t n = llr4.size() / 4;
    DecoderInput in;
    in.systematic.resize(n);
    for (auto& p : in.parity) p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.systematic[i] = llr4[4 * i];
        in.parity[0][i] = llr4[4 * i + 1];
        in.parity[1][i] = llr4[4 * i + 2];
        in.parity[2][i] = llr4[4 * i + 3];
    }
    in.il1 = &pair.il1;
    in.il2 = &pair.il2;
    return in;
}

}  // namespace

TEST_CASE("a noiseless codeword decodes exactly in one iteration") {
    const Trellis t = Trellis::rsc();
    const std::size_t n = 128;
    const CodePair pair = make_interleavers(n, 77);
    RngStream rng(78, 0);
    BitBlock bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u32() & 1u);

    const auto cw = pccc_encode(bits, t, pair.il1, pair.il2);
    LlrBlock llr(4 * n);
    for (std::size_t i = 0; i < 4 * n; ++i) llr[i] = cw.multiplexed[i] ? 25.0 : -25.0;

    REQUIRE(turbo_decode(make_input(llr, pair), 1, t) == bits);
}

TEST_CASE("iteration schedule has the prefix property") {
    const Trellis t = Trellis::rsc();
    const std::size_t n = 64;
    const CodePair pair = make_interleavers(n, 79);
    RngStream rng(80, 0);
    BitBlock bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u32() & 1u);
    const auto cw = pccc_encode(bits, t, pair.il1, pair.il2);

    std::vector<double> bipolar = tcofdm::to_bipolar(cw.multiplexed);
    RngStream noise(81, 0);
    for (auto& v : bipolar) v += 0.9 * noise.gaussian_pair().first;
    const LlrBlock llr = scale_received(bipolar, 0.81);

    const auto five = turbo_decode_iterations(make_input(llr, pair), 5, t);
    const auto three = turbo_decode_iterations(make_input(llr, pair), 3, t);
    REQUIRE(five.size() == 5);
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(five[i] == three[i]);
    REQUIRE(turbo_decode(make_input(llr, pair), 5, t) == five[4]);
}

TEST_CASE("iterations reduce errors on average at 1 dB") {
    // Decoder-level chain: encode, bipolar, AWGN at Eb/N0 = 1 dB for rate
    // 1/4, hard decision, 2/var scaling, decode. Error totals per iteration
    // over many blocks should be non-increasing (small statistical slack).
    const Trellis t = Trellis::rsc();
    const std::size_t n = 128;
    const int blocks = 1200;
    const CodePair pair = make_interleavers(n, 90);

    tcofdm::AwgnConfig awgn;
    awgn.ebn0_db = 1.0;
    awgn.code_rate = 0.25;
    const double sigma2 = tcofdm::noise_variance(awgn);
    const double sigma = std::sqrt(sigma2);

    std::vector<long long> errors(5, 0);
    RngStream src(91, 0), noise(92, 0);
    for (int blk = 0; blk < blocks; ++blk) {
        BitBlock bits(n);
        for (auto& b : bits) b = static_cast<std::uint8_t>(src.next_u32() & 1u);
        const auto cw = pccc_encode(bits, t, pair.il1, pair.il2);

        std::vector<double> rx = tcofdm::to_bipolar(cw.multiplexed);
        for (auto& v : rx) v += sigma * noise.gaussian_pair().first;
        BitBlock hard(rx.size());
        for (std::size_t i = 0; i < rx.size(); ++i) hard[i] = rx[i] > 0.0 ? 1 : 0;
        const LlrBlock llr = scale_received(tcofdm::to_bipolar(hard), sigma2);

        const auto decisions = turbo_decode_iterations(make_input(llr, pair), 5, t);
        for (std::size_t it = 0; it < 5; ++it)
            for (std::size_t i = 0; i < n; ++i)
                errors[it] += decisions[it][i] != bits[i];
    }

    for (std::size_t it = 0; it + 1 < 5; ++it)
        REQUIRE(errors[it + 1] <= errors[it] + errors[it] / 50 + 20);
    REQUIRE(errors[4] < errors[0]);
}

TEST_CASE("turbo_decode validates its input") {
    const Trellis t = Trellis::rsc();
    const CodePair pair = make_interleavers(8, 95);
    DecoderInput in = make_input(LlrBlock(32, 0.0), pair);
    REQUIRE_THROWS_AS(turbo_decode(in, 0, t), std::invalid_argument);
    in.parity[1].resize(7);
    REQUIRE_THROWS_AS(turbo_decode(in, 1, t), std::invalid_argument);
}
