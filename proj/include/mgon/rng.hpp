#ifndef MGON_RNG_HPP
#define MGON_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace mgon {

// Splittable counter-based generator. Each (master seed, stream index) pair
// yields an independent stream, so parallel trials stay reproducible no
// matter how work is scheduled.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0) {
        state_ = mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
        if (state_ == 0) state_ = 0x4d595df4d0f33173ULL;
    }

    Rng split(uint64_t stream) const { return Rng(state_, stream + 1); }

    uint64_t next_u64() {
        // splitmix64
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    uint64_t next_below(uint64_t n) {
        // rejection sampling to avoid modulo bias
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + (int)next_below((uint64_t)(hi - lo + 1));
    }

    double exponential(double mean) {
        double u;
        do { u = next_double(); } while (u <= 0.0);
        return -mean * std::log(u);
    }

    // index sampled from an (unnormalized) weight vector
    int discrete(const std::vector<double>& w) {
        double total = 0;
        for (double x : w) total += x;
        double u = next_double() * total;
        double acc = 0;
        for (size_t i = 0; i < w.size(); ++i) {
            acc += w[i];
            if (u < acc) return (int)i;
        }
        return (int)w.size() - 1;
    }

    int binomial(int n, double p) {
        // direct simulation; n is small everywhere we use this
        int c = 0;
        for (int i = 0; i < n; ++i)
            if (next_double() < p) ++c;
        return c;
    }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        return z ^ (z >> 33);
    }
    uint64_t state_;
};

}  // namespace mgon

#endif
