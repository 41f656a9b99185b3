#pragma once

// Portable, seedable PRNG for the removal simulation. The whole stream is
// defined by integer arithmetic on uint64, so any language can reproduce it:
//
//   stream_seed(base, review, i) = mix(mix(base ^ fnv1a64(review)) ^ (i + 1))
//   next():  state += 0x9E3779B97F4A7C15; return mix(state)
//   mix(z):  z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
//            z = (z ^ z>>27) * 0x94D049BB133111EB
//            return z ^ z>>31
//   uniform(bound): draw x until x >= (2^64 - bound) mod bound; x mod bound

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace oeval {

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept;

    // Unbiased integer in [0, bound); bound must be > 0.
    std::uint64_t uniform(std::uint64_t bound) noexcept;

private:
    std::uint64_t state_;
};

std::uint64_t stream_seed(std::uint64_t base_seed, std::string_view review_id,
                          std::uint64_t seed_index) noexcept;

// Partial Fisher-Yates: afterwards items[0, n) is a uniform sample without
// replacement. n is clamped to items.size().
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t n, SplitMix64& rng) {
    const std::size_t size = items.size();
    if (n > size) n = size;
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform(size - i));
        using std::swap;
        swap(items[i], items[j]);
    }
}

}  // namespace oeval
