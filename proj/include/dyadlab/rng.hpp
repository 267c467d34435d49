#pragma once

#include <cstdint>

namespace dyadlab {

// Counter-based pseudo-random generator.
//
// Every draw is a pure function of (key, counters), so results do not depend
// on evaluation order or thread count. Derived keys (child streams) keep
// independent uses of one user seed from colliding. The mixer is the
// standard splitmix64 finalizer, which is statistically solid for
// simulation-grade sampling; nothing here is meant for cryptography.

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct Rng {
    std::uint64_t key = 0;

    static Rng seeded(std::uint64_t seed) {
        return Rng{mix64(seed ^ 0x6c795f8bd7a16f21ull)};
    }

    // Independent stream derived from this one. Streams with different tags
    // never share draws.
    Rng child(std::uint64_t tag) const {
        return Rng{mix64(key ^ mix64(tag ^ 0x94f1c53da1b2e90dull))};
    }

    // One 64-bit word addressed by up to four counters.
    std::uint64_t at(std::uint64_t a, std::uint64_t b = 0,
                     std::uint64_t c = 0, std::uint64_t d = 0) const {
        std::uint64_t h = key;
        h = mix64(h ^ (a + 0x8cb92ba72f3d8dd7ull));
        h = mix64(h ^ (b + 0xd6e8feb86659fd93ull));
        h = mix64(h ^ (c + 0xa0761d6478bd642full));
        h = mix64(h ^ (d + 0xe7037ed1a0b428dbull));
        return h;
    }

    // Uniform double in [0, 1), 53 significant bits.
    double unit_at(std::uint64_t a, std::uint64_t b = 0,
                   std::uint64_t c = 0, std::uint64_t d = 0) const {
        return static_cast<double>(at(a, b, c, d) >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n). Bias is on the order of n / 2^64.
    std::uint64_t index_at(std::uint64_t n, std::uint64_t a, std::uint64_t b = 0,
                           std::uint64_t c = 0, std::uint64_t d = 0) const {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((u128(at(a, b, c, d)) * u128(n)) >> 64);
    }
};

} // namespace dyadlab
