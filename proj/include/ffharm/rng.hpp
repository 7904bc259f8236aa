#ifndef FFHARM_RNG_HPP
#define FFHARM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace ffharm {

// splitmix64, used only to derive well-separated sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic sub-seed for (seed, prime, trial) so that parallel and serial
// schedules draw identical numbers.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t p, std::uint64_t trial) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ p) ^ trial);
}

// mt19937_64 with explicit bit-to-double conversion; std::*_distribution is
// implementation-defined, and reports must be reproducible byte for byte.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    // unbiased integer in [0, n)
    std::int64_t below(std::int64_t n) {
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x;
        do {
            x = bits();
        } while (x >= limit);
        return static_cast<std::int64_t>(x % range);
    }

    bool bernoulli(double density) { return uniform01() < density; }

    std::complex<double> unit_modulus() {
        const double phase = 2.0 * std::numbers::pi * uniform01();
        return {std::cos(phase), std::sin(phase)};
    }

   private:
    std::mt19937_64 eng_;
};

}  // namespace ffharm

#endif
