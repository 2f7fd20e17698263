#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <set>

#include "tcofdm/modem.hpp"
#include "tcofdm/rng.hpp"

using tcofdm::BitBlock;
using tcofdm::cplx;
using tcofdm::qpsk_demodulate_hard;
using tcofdm::qpsk_modulate;
using tcofdm::to_bipolar;

TEST_CASE("bit pair 00 maps to the pi/4 point") {
    const auto sym = qpsk_modulate({0, 0});
    REQUIRE(sym.size() == 1);
    REQUIRE(sym[0].real() == Catch::Approx(0.70711).epsilon(1e-4));
    REQUIRE(sym[0].imag() == Catch::Approx(0.70711).epsilon(1e-4));
}

TEST_CASE("four bit pairs map to four distinct unit-magnitude symbols") {
    std::set<std::pair<double, double>> seen;
    for (int b1 = 0; b1 < 2; ++b1)
        for (int b0 = 0; b0 < 2; ++b0) {
            const auto sym = qpsk_modulate({static_cast<std::uint8_t>(b1),
                                            static_cast<std::uint8_t>(b0)});
            REQUIRE(std::abs(sym[0]) == Catch::Approx(1.0).epsilon(1e-15));
            seen.insert({sym[0].real(), sym[0].imag()});
        }
    REQUIRE(seen.size() == 4);
}

TEST_CASE("mean symbol energy is exactly 1") {
    tcofdm::RngStream rng(61, 0);
    BitBlock bits(2000);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u32() & 1u);
    double energy = 0.0;
    for (const auto& s : qpsk_modulate(bits)) energy += std::norm(s);
    REQUIRE(energy / 1000.0 == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("odd bit counts are rejected") {
    REQUIRE_THROWS_AS(qpsk_modulate({1}), std::invalid_argument);
}

TEST_CASE("demodulate inverts modulate for every 4-bit pattern") {
    for (int v = 0; v < 16; ++v) {
        const BitBlock bits = {static_cast<std::uint8_t>((v >> 3) & 1),
                               static_cast<std::uint8_t>((v >> 2) & 1),
                               static_cast<std::uint8_t>((v >> 1) & 1),
                               static_cast<std::uint8_t>(v & 1)};
        REQUIRE(qpsk_demodulate_hard(qpsk_modulate(bits)) == bits);
    }
}

TEST_CASE("a perturbed symbol inside the decision region keeps its bits") {
    const cplx sym = cplx(0.70711, 0.70711) + cplx(0.1, -0.05);
    REQUIRE(qpsk_demodulate_hard({sym}) == BitBlock({0, 0}));
}

TEST_CASE("decision-boundary ties resolve toward the smaller Gray label") {
    REQUIRE(qpsk_demodulate_hard({cplx(1.0, 0.0)}) == BitBlock({0, 0}));
    REQUIRE(qpsk_demodulate_hard({cplx(-1.0, 0.0)}) == BitBlock({0, 1}));
    REQUIRE(qpsk_demodulate_hard({cplx(0.0, 1.0)}) == BitBlock({0, 0}));
    REQUIRE(qpsk_demodulate_hard({cplx(0.0, -1.0)}) == BitBlock({1, 0}));
}

TEST_CASE("angularly adjacent constellation points differ in one bit") {
    // walk the circle k = 0..3 and compare bit labels of neighbours
    const BitBlock patterns = {0, 0, 0, 1, 1, 1, 1, 0};  // Gray sequence
    const auto symbols = qpsk_modulate(patterns);
    for (int k = 0; k < 4; ++k) {
        const int next = (k + 1) % 4;
        const double angle = std::arg(symbols[next] * std::conj(symbols[k]));
        REQUIRE(std::abs(angle) == Catch::Approx(3.14159265 / 2).epsilon(1e-6));
        const int hamming = (patterns[2 * k] != patterns[2 * next]) +
                            (patterns[2 * k + 1] != patterns[2 * next + 1]);
        REQUIRE(hamming == 1);
    }
}

TEST_CASE("rotations below pi/4 do not move decisions") {
    tcofdm::RngStream rng(62, 0);
    BitBlock bits(400);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u32() & 1u);
    auto symbols = qpsk_modulate(bits);
    const cplx rot = std::polar(1.0, 0.7);  // < pi/4
    for (auto& s : symbols) s *= rot;
    REQUIRE(qpsk_demodulate_hard(symbols) == bits);
}

TEST_CASE("unipolar to bipolar conversion") {
    REQUIRE(to_bipolar({0, 1, 1, 0}) == std::vector<double>({-1.0, 1.0, 1.0, -1.0}));
    REQUIRE(to_bipolar({0, 0, 0}) == std::vector<double>({-1.0, -1.0, -1.0}));

    tcofdm::RngStream rng(63, 0);
    BitBlock bits(100);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u32() & 1u);
    const auto bipolar = to_bipolar(bits);
    for (std::size_t i = 0; i < bits.size(); ++i)
        REQUIRE((bipolar[i] > 0.0 ? 1 : 0) == bits[i]);
}
