#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pec {

// Deterministic random source. mt19937_64 has a fully specified output
// sequence, and the bit-to-double mapping below is explicit, so runs are
// reproducible across platforms (std::uniform_real_distribution is not
// pinned down by the standard and is avoided on purpose).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Independent per-trial stream. Evaluating a different tuple on the
    // same (seed, trial) reuses the exact same draws (common random
    // numbers). The SplitMix64 finalizer keeps the streams of nearby seeds
    // disjoint: a plain xor/add of seed and trial would make two runs with
    // different seeds draw permutations of the same stream set, collapsing
    // their aggregate statistics onto identical values.
    static Rng substream(std::uint64_t seed, std::uint64_t trial) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return Rng(z);
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on (0, 1]. The top 53 bits give a dyadic in [0, 1); adding
    // one ulp shifts the support so log() below never sees zero.
    double uniform01() {
        return double((eng_() >> 11) + 1) * 0x1p-53;
    }

    // Exponential with the given rate; a draw of u = 1 maps to exactly 0.
    double exponential(double rate) {
        return -std::log(uniform01()) / rate;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace pec
