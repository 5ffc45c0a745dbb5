#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace vaxnet {

/// Deterministic, splittable random stream.
///
/// A stream is identified by a master seed and a path of integers. The path is
/// folded into a 64-bit key with the SplitMix64 finalizer, and the key seeds a
/// xoshiro256** generator. Distinct paths give unrelated keys, so every worker
/// can derive its own stream from (seed, task indices) and results do not
/// depend on scheduling.
///
/// Generator family: SplitMix64 key derivation + xoshiro256**. Fixed; changing
/// it changes every reproducible output in the project.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t master_seed, std::span<const std::uint64_t> path);
    RandomStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
        : RandomStream(master_seed, std::span<const std::uint64_t>(path.begin(), path.size())) {}
    explicit RandomStream(std::uint64_t master_seed) : RandomStream(master_seed, {}) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform double in (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }
    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

    /// Child stream keyed by this stream's key and an extra path element.
    RandomStream split(std::uint64_t index) const;

    std::uint64_t key() const { return key_; }

private:
    struct Prefix {};
    RandomStream(Prefix, std::uint64_t prefix, std::size_t depth);
    void seed_state();

    std::uint64_t prefix_;
    std::size_t depth_;
    std::uint64_t key_ = 0;
    std::uint64_t s_[4];
};

inline RandomStream derive_stream(std::uint64_t master_seed,
                                  std::initializer_list<std::uint64_t> path) {
    return RandomStream(master_seed, path);
}

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace vaxnet
