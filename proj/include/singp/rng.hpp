#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "singp/dist.hpp"

namespace singp {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256** seeded through SplitMix64.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }
    result_type operator()() { return next(); }
    std::uint64_t next() {
        std::uint64_t x = s_[1] * 5;
        std::uint64_t result = ((x << 7) | (x >> 57)) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = (s_[3] << 45) | (s_[3] >> 19);
        return result;
    }

private:
    std::array<std::uint64_t, 4> s_;
};

// Counter-mode trial seeding: the stream for a trial depends only on
// (master_seed, trial_index), never on worker scheduling.
inline Xoshiro256 trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
    SplitMix64 sm{master_seed ^ (trial_index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL)};
    return Xoshiro256(sm.next());
}

// Inverse-CDF sampler with 64-bit thresholds derived exactly from the
// rational probabilities (bias below 2^-63 per atom).
class DiscreteSampler {
public:
    explicit DiscreteSampler(const DiscreteDist& dist) {
        Rational cum(0);
        const Integer two64 = Integer(1) << 64;
        for (const auto& atom : dist.atoms()) {
            cum += atom.prob;
            Integer scaled = (cum.get_num() << 64) / cum.get_den();
            std::uint64_t thr = scaled >= two64 ? ~0ULL : static_cast<std::uint64_t>(scaled.get_ui());
            values_.push_back(atom.value);
            thresholds_.push_back(thr);
        }
        thresholds_.back() = ~0ULL;
    }

    long long sample(Xoshiro256& rng) const {
        std::uint64_t u = rng.next();
        std::size_t lo = 0, hi = thresholds_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (u < thresholds_[mid]) hi = mid; else lo = mid + 1;
        }
        return values_[lo];
    }

    std::size_t atom_count() const { return values_.size(); }

private:
    std::vector<std::uint64_t> thresholds_;
    std::vector<long long> values_;
};

} // namespace singp
