#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dhne {

// splitmix64 finalizer; used to derive decorrelated seeds for sub-streams.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic random source. All draws are fully specified by the seed: the
// engine is mt19937_64 (standard-mandated sequence) and every derived draw
// below is implemented by hand rather than via distribution objects, whose
// output is implementation-defined.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of randomness.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n). n must be >= 1.
    size_t uniform_index(size_t n) {
        const uint64_t span = static_cast<uint64_t>(n);
        const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        for (;;) {
            const uint64_t r = next_u64();
            if (r < limit) return static_cast<size_t>(r % span);
        }
    }

    bool chance(double p) { return uniform() < p; }

    // Fisher-Yates with our own bounded draw, so shuffles are portable.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace dhne
