#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Deterministic random source. mt19937_64 output is fully specified by the
// standard; the distributions layered on top (bounded ints, uniforms, normals,
// shuffling) are implementation-defined in <random>, so they are hand-rolled
// here. A fixed seed therefore yields the same stream on every platform and
// standard library.

namespace sigjeff {

// splitmix64 finalizer; good avalanche for deriving stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent stream for substream `index` of a run seeded with `seed`
    // (one stream per permutation; streams do not depend on evaluation order).
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix64(seed ^ mix64(index)));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, bound), unbiased via rejection.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Standard normal, Marsaglia polar method with cached spare.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Fisher-Yates.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t k = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[k]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sigjeff
