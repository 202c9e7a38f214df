#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "dynascore/error.hpp"

namespace dynascore {

// splitmix64 finalizer; also the mixing round of stream derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream label from a component tag and up to three indices:
// FNV-1a over the tag bytes, then one mix64 round per index.
constexpr std::uint64_t derive_stream(std::string_view tag, std::uint64_t a = 0,
                                      std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : tag) {
        h = (h ^ static_cast<unsigned char>(ch)) * 0x100000001b3ULL;
    }
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// Deterministic random stream. The same (seed, stream_id) yields the same
// sequence on every platform: the engine is std::mt19937_64, whose output
// is fully specified by the standard, and the sampling helpers below avoid
// std::*_distribution, whose results differ between standard libraries.
// Distinct stream ids give independent, non-overlapping-in-practice streams
// for parallel work.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : engine_(mix64(seed ^ mix64(stream_id))) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased uniform draw from [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) {
            throw ParamError("RngStream::below requires a positive bound");
        }
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Consumes exactly one engine draw. Exact at both endpoints:
    // prob 0 never fires, prob 1 always fires.
    bool bernoulli(double prob) { return next_unit() < prob; }

private:
    std::mt19937_64 engine_;
};

} // namespace dynascore
