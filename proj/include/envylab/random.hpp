#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace envylab {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Folds a list of words into one key; order-sensitive.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (std::uint64_t p : parts) {
        h = mix64(h ^ mix64(p + 0x9E3779B97F4A7C15ULL));
    }
    return h;
}

/// Counter-based generator: the k-th output is a pure function of (key, k),
/// so independent streams are obtained by deriving distinct keys instead of
/// sharing or jumping one state. Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key = 0) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// A replication's identity: one master seed plus a replication index.
struct Seed {
    std::uint64_t master_seed = 0;
    std::uint64_t replication_index = 0;

    constexpr std::uint64_t key() const noexcept { return derive_seed({master_seed, replication_index}); }

    // Independent sub-stream for a named purpose within this replication.
    constexpr CounterRng stream(std::uint64_t purpose, std::uint64_t index = 0) const noexcept {
        return CounterRng(derive_seed({key(), purpose, index}));
    }

    friend constexpr bool operator==(const Seed&, const Seed&) = default;
};

// Purpose tags for Seed::stream.
namespace stream_tag {
inline constexpr std::uint64_t student_prefs = 1;
inline constexpr std::uint64_t school_priorities = 2;
inline constexpr std::uint64_t queue = 3;
inline constexpr std::uint64_t serial_order = 4;
inline constexpr std::uint64_t endowment = 5;
inline constexpr std::uint64_t coupon = 6;
}  // namespace stream_tag

}  // namespace envylab
