#pragma once

#include <cstdint>
#include <vector>

namespace alt {

// splitmix64: small, portable 64-bit generator. All seeded behavior in the
// library (splits, folds, SGD sampling) goes through this so that runs
// reproduce bit-for-bit across platforms, unlike std:: distributions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // unbiased integer in [0, n), n >= 1 (Lemire multiply-shift rejection)
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    // independent stream for a labeled subtask (fold index, grid index, ...)
    static SplitMix64 keyed(std::uint64_t seed, std::uint64_t tag) {
        SplitMix64 mix(tag);
        return SplitMix64(seed ^ mix.next());
    }

private:
    std::uint64_t state_;
};

} // namespace alt
