#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace osim {

// 64-bit FNV-1a over a byte string. Used to derive substream seeds from
// stream names; the constants are part of the reproducibility contract
// documented in the README.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64 finalizer (Steele et al.); full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Converts 64 random bits to a double in [0, 1) with 53-bit resolution.
constexpr double bits_to_unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

enum class Stream : std::uint8_t {
    Network,
    Population,
    Attempts,
    Outcomes,
    Substitution,
    Withdrawals,
};

std::string_view stream_name(Stream s);

// Stateful generator for the setup phases (network construction, population
// sampling), where draw counts are data-dependent and evaluation is
// inherently sequential. mt19937_64 is fully specified by the standard, so
// the sequence is identical across platforms.
class SequentialRng {
public:
    explicit SequentialRng(std::uint64_t seed) : engine_(seed) {}

    double next_double() { return bits_to_unit_double(engine_()); }

    // Uniform integer in [0, n). Multiply-shift reduction; the bias is
    // O(n / 2^64) and irrelevant at simulation scale.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

private:
    std::mt19937_64 engine_;
};

// Named substreams of one master seed.
//
// Setup streams are consumed sequentially (see SequentialRng). Per-step
// streams are counter-based: each draw is keyed by (step, entity id, draw
// index) and hashed independently, so a value never depends on how many
// draws other entities or other streams consumed, nor on the order in which
// workers evaluate them. This is what makes paired-seed comparisons and
// worker-count-independent determinism possible.
class RngStreams {
public:
    explicit RngStreams(std::uint64_t master) : master_(master) {}

    std::uint64_t master() const { return master_; }

    std::uint64_t stream_seed(Stream s) const {
        return mix64(master_ ^ fnv1a64(stream_name(s)));
    }

    double keyed_uniform(Stream s, std::uint64_t t, std::uint64_t id,
                         std::uint64_t k = 0) const {
        std::uint64_t h = stream_seed(s);
        h = mix64(h ^ t);
        h = mix64(h ^ id);
        h = mix64(h ^ k);
        return bits_to_unit_double(h);
    }

    SequentialRng sequential(Stream s) const { return SequentialRng(stream_seed(s)); }

private:
    std::uint64_t master_;
};

} // namespace osim
