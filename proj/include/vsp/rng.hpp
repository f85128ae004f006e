#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace vsp {

// 64-bit linear congruential generator, modulus 2^64 (unsigned wraparound).
// Reproducible across languages, which std:: engines are not guaranteed to be.
class Lcg64 {
public:
    static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
    static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    // Advances the state and returns it.
    std::uint64_t next() {
        state_ = state_ * kMultiplier + kIncrement;
        return state_;
    }

    // Index in [0, bound) taken from the high 31 bits of the state.
    std::uint64_t below(std::uint64_t bound) { return (next() >> 33) % bound; }

private:
    std::uint64_t state_;
};

// Fisher-Yates from the back: for i = n-1 .. 1, swap(i, below(i + 1)).
template <typename T>
void seeded_shuffle(std::span<T> items, std::uint64_t seed) {
    if (items.size() < 2) return;
    Lcg64 rng(seed);
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        auto j = static_cast<std::size_t>(rng.below(i + 1));
        using std::swap;
        swap(items[i], items[j]);
    }
}

}  // namespace vsp
