#include "oeval/rng.hpp"

namespace oeval {

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t SplitMix64::next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
}

std::uint64_t SplitMix64::uniform(std::uint64_t bound) noexcept {
    // (2^64 - bound) % bound == 2^64 % bound
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = next();
        if (x >= threshold) return x % bound;
    }
}

std::uint64_t stream_seed(std::uint64_t base_seed, std::string_view review_id,
                          std::uint64_t seed_index) noexcept {
    return splitmix64_mix(splitmix64_mix(base_seed ^ fnv1a64(review_id)) ^ (seed_index + 1));
}

}  // namespace oeval
