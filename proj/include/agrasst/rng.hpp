#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace agrasst {

// Derives an independent stream seed from a base seed and a stream index.
// splitmix64 finalizer over a golden-ratio stride; the mixing is fixed so that
// every run (and every thread count) sees the same derived seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded generator with portable draw semantics.  std::mt19937_64 produces a
// bit-stable stream by the standard; the distribution helpers below avoid
// std::uniform_*_distribution, whose output is implementation defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound).  Rejection sampling keeps the
    // distribution exact and the stream portable.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % bound;
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace agrasst
