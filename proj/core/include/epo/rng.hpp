#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace epo {

// Counter-based Gaussian generator. Every draw is a pure function of
// (seed, path, step), so path i sees the same shocks no matter how many
// paths are simulated or how the work is split across threads.
class CounterRng {
public:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t key(std::uint64_t seed, std::uint64_t path,
                             std::uint64_t step, std::uint64_t dim) {
        std::uint64_t k = mix(seed);
        k = mix(k ^ (path * 0xA24BAED4963EE407ULL + 0x9FB21C651E98DF25ULL));
        k = mix(k ^ (step * 0xD6E8FEB86659FD93ULL + dim));
        return k;
    }

    // Uniform in (0, 1].
    static double uniform(std::uint64_t seed, std::uint64_t path,
                          std::uint64_t step, std::uint64_t dim) {
        return static_cast<double>((key(seed, path, step, dim) >> 11) + 1) * 0x1.0p-53;
    }

    // Independent standard normal pair via Box-Muller.
    static std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t path,
                                                 std::uint64_t step) {
        const double u1 = uniform(seed, path, step, 0);
        const double u2 = uniform(seed, path, step, 1);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }
};

} // namespace epo
