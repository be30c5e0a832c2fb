#pragma once

#include <cmath>
#include <cstdint>

#include "matrix.hpp"

namespace qcvx {

/// Counter-based generator: output i of stream `seed` is a fixed hash of
/// (seed, i). Streams derived as derive(seed, k) are independent, which lets
/// sampling iterations run in any order while staying reproducible.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return mix(seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xbf58476d1ce4e5b9ULL));
    }

    std::uint64_t next_u64() { return mix(seed_ ^ mix(counter_++)); }

    /// uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// standard normal (Box-Muller)
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 1e-300) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// uniform direction on the unit sphere in R^m
    Vec next_unit_vector(std::size_t m) {
        Vec d(m);
        double n2 = 0.0;
        while (n2 < 1e-12) {
            for (std::size_t i = 0; i < m; ++i) d[i] = next_gaussian();
            n2 = 0.0;
            for (std::size_t i = 0; i < m; ++i) n2 += norm2(d[i]);
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (std::size_t i = 0; i < m; ++i) d[i] = inv * d[i];
        return d;
    }

    /// standard complex gaussian vector in C^n
    Vec next_complex_gaussian(std::size_t n) {
        Vec x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = {next_gaussian(), next_gaussian()};
        return x;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qcvx
