// survstack: random number utilities.
//
// All randomness in the library flows through Rng so that results are
// reproducible bit-for-bit for a given seed, independent of the standard
// library's distribution implementations.
#pragma once

#include <cmath>
#include <cstdint>

namespace survstack {

// SplitMix64; used both as a generator and to derive independent
// substreams (e.g. one stream per stacked event time).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds diverge immediately
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is negligible for n << 2^64
        return next_u64() % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // standard normal via Box-Muller (no cached spare; keeps the stream
    // position a pure function of the number of calls)
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    double exponential(double rate) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return -std::log(u) / rate;
    }

    // Derive an independent generator; `stream` tags the substream.
    Rng split(std::uint64_t stream) const {
        std::uint64_t s = state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        return Rng(splitmix64(s));
    }

  private:
    std::uint64_t state_;
};

}  // namespace survstack
