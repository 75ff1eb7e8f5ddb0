#pragma once

// Counter-based deterministic generator. Every draw is a pure function of
// (seed, stream, counter), so scenario generation is reproducible across
// platforms and insertion order never shifts downstream draws.

#include <cmath>
#include <cstdint>

namespace ffwd {

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    // splitmix64-style finalizer over the combined key
    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (counter + 1) +
                          0xbf58476d1ce4e5b9ull * (stream_ + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; consumes counters 2k and 2k+1
    double normal(std::uint64_t counter) const {
        double u1 = uniform(2 * counter);
        double u2 = uniform(2 * counter + 1);
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace ffwd
