#ifndef QSEL_RNG_HPP
#define QSEL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace qsel {

// Seedable random stream with platform-independent output.
//
// std::mt19937_64 itself is fully specified by the standard, but the
// distribution adaptors (std::uniform_int_distribution et al.) are not,
// so the bounded draws are implemented here. Same seed, same sequence,
// on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, n). Rejection sampling keeps the draw exactly unbiased.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<std::size_t>(x % n);
    }

    // Uniform in [lo, hi).
    double uniform_range(double lo, double hi) {
        return lo + (hi - lo) * uniform_real();
    }

    // Log-uniform in [lo, hi); lo and hi must be positive.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform_range(std::log(lo), std::log(hi)));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace qsel

#endif  // QSEL_RNG_HPP
