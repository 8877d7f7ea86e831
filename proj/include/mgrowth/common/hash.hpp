#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mgrowth {

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/**
 * Deterministic seed fan-out for per-task randomness.
 *
 * child = mix(global_seed, series_id, approach, run_index). Adding or
 * removing a series never perturbs the seeds handed to any other series.
 */
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view series_id,
                                 std::string_view approach, std::uint64_t run_index) {
    std::uint64_t h = fnv1a64(series_id);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(approach, h);
    h ^= splitmix64(global_seed);
    h ^= splitmix64(run_index + 0x5851f42d4c957f2dULL);
    return splitmix64(h);
}

}  // namespace mgrowth
