#pragma once

#include <cstdint>
#include <random>

namespace qpack {

// Seeded deterministic randomness. Every stochastic operation takes one of
// these (or a seed) explicitly; identical seeds give identical runs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for trial `t` of a master-seeded experiment.
    static Rng for_trial(std::uint64_t master_seed, std::uint64_t t) {
        return Rng(mix(master_seed, t));
    }

    double uniform() { return dist_(engine_); }

    std::uint64_t integer(std::uint64_t bound) {  // uniform in [0, bound)
        std::uniform_int_distribution<std::uint64_t> d(0, bound - 1);
        return d(engine_);
    }

    double gaussian(double mean, double stddev) {
        std::normal_distribution<double> d(mean, stddev);
        return d(engine_);
    }

    // Samples an index from unnormalized nonnegative weights.
    template <typename V>
    int weighted(const V& weights) {
        double total = 0;
        for (double w : weights) total += w;
        double r = uniform() * total;
        int last = 0;
        int i = 0;
        for (double w : weights) {
            if (r < w) return i;
            r -= w;
            last = i++;
        }
        return last;
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        // splitmix64 over the pair keeps trial streams decorrelated
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

}  // namespace qpack
