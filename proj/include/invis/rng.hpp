#pragma once

#include <cstdint>
#include <random>

namespace invis {

// Seeded mt19937_64 with an explicit 53-bit mapping to [0,1). The conversion
// is spelled out (rather than using a distribution) so the stream is
// byte-identical across standard libraries.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

} // namespace invis
