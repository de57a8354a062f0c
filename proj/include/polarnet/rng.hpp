#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace polarnet {

/// splitmix64-style mixing; derives independent stream seeds from a root seed
/// so experiments are reproducible and order-independent.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic RNG. Doubles are built directly from the 64-bit stream so
/// draws do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    /// Standard real Gaussian (Box-Muller).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        const double t = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly-symmetric complex Gaussian CN(0, 1).
    std::complex<double> complex_gaussian() {
        const double s = std::sqrt(0.5);
        const double re = s * gaussian();
        const double im = s * gaussian();
        return {re, im};
    }

    /// Unbiased uniform integer in [0, bound).
    std::size_t uniform_index(std::size_t bound) {
        const std::uint64_t b = bound;
        const std::uint64_t threshold = (UINT64_MAX / b) * b;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= threshold);
        return static_cast<std::size_t>(x % b);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace polarnet
