#include "vaxnet/random.hpp"

namespace vaxnet {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t fold(std::uint64_t key, std::uint64_t element) {
    return splitmix64(key ^ splitmix64(element + kGolden));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t master_seed, std::span<const std::uint64_t> path)
    : prefix_(splitmix64(master_seed)), depth_(path.size()) {
    for (std::uint64_t p : path) prefix_ = fold(prefix_, p);
    seed_state();
}

RandomStream::RandomStream(Prefix, std::uint64_t prefix, std::size_t depth) : prefix_(prefix), depth_(depth) {
    seed_state();
}

void RandomStream::seed_state() {
    // Path length is folded in so that (s) and (s, 0) differ.
    key_ = fold(prefix_, depth_);
    std::uint64_t x = key_;
    for (auto& s : s_) {
        x += kGolden;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        s = z ^ (z >> 31);
    }
}

RandomStream::result_type RandomStream::operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t RandomStream::below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection; unbiased and platform independent.
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            x = (*this)();
            m = static_cast<__uint128_t>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

RandomStream RandomStream::split(std::uint64_t index) const {
    return RandomStream(Prefix{}, fold(prefix_, index), depth_ + 1);
}

}  // namespace vaxnet
