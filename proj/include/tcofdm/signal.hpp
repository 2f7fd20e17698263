#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace tcofdm {

using cplx = std::complex<double>;
using BitBlock = std::vector<std::uint8_t>;

enum class Domain { frequency, time };

// A block of complex baseband samples. The tag records which side of the
// transform the frame lives on; the numeric content is just the samples.
struct ComplexFrame {
    std::vector<cplx> samples;
    Domain domain = Domain::time;

    ComplexFrame() = default;
    explicit ComplexFrame(std::vector<cplx> s, Domain d = Domain::time)
        : samples(std::move(s)), domain(d) {}
    ComplexFrame(std::size_t n, Domain d) : samples(n), domain(d) {}

    std::size_t size() const { return samples.size(); }
    cplx& operator[](std::size_t i) { return samples[i]; }
    const cplx& operator[](std::size_t i) const { return samples[i]; }
};

inline bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

}  // namespace tcofdm
