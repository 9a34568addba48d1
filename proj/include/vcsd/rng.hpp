#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vcsd {

// Counter-based splittable random stream built on splitmix64. Child streams are
// derived by hashing (seed, tags), so parallel consumers with distinct tags draw
// from statistically independent sequences regardless of evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kGamma)) {}

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    // Draw from a discrete distribution given by cumulative-free probabilities.
    std::size_t discrete(const std::vector<double>& probs) {
        double u = uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return probs.empty() ? 0 : probs.size() - 1;
    }

    // Derived stream identified by up to two tags.
    Rng split(std::uint64_t a, std::uint64_t b = 0) const {
        Rng child(0);
        child.state_ = mix(state_ ^ mix(a + kGamma) ^ mix(b + 2 * kGamma));
        return child;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace vcsd
