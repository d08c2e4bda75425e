#pragma once

#include <cstdint>
#include <random>

namespace hghz {

// splitmix64, used to derive independent stream seeds from (seed, stream_id).
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG. Each thread/trial owns its own stream: Rng(seed, stream_id).
// Uniform sampling uses mask rejection so results do not depend on the
// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed, uint64_t stream = 0) {
        uint64_t s = seed ^ (0x5851f42d4c957f2dULL * (stream + 1));
        std::seed_seq seq{splitmix64(s), splitmix64(s), splitmix64(s), splitmix64(s)};
        gen_.seed(seq);
    }

    uint64_t next_u64() { return gen_(); }

    // uniform over [0, bound), bound >= 1
    uint64_t uniform_below(uint64_t bound) {
        if (bound <= 1) return 0;
        uint64_t mask = ~0ULL >> __builtin_clzll((bound - 1) | 1);
        for (;;) {
            uint64_t v = gen_() & mask;
            if (v < bound) return v;
        }
    }

    // uniform over [lo, hi] inclusive
    int64_t uniform_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(uniform_below(static_cast<uint64_t>(hi - lo) + 1));
    }

    int bit() { return static_cast<int>(gen_() >> 63); }

    // uniform in [0,1) with 53 random bits
    double real01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 gen_;
};

} // namespace hghz
