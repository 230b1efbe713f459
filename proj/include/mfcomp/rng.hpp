#pragma once

#include <cstdint>
#include <random>

namespace mfcomp {

using Rng = std::mt19937_64;

// One step of the splitmix64 generator. Used only to mix seeds, never to
// produce the random streams themselves.
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a sub-stream seed from a master seed and a path of indices, e.g.
// derive_seed(master, leg, member). Feeding each index through splitmix64 in
// order makes every (master, path) pair map to a distinct, reproducible seed,
// so ensembles are stable under any execution order.
template <typename... Index>
constexpr std::uint64_t derive_seed(std::uint64_t master, Index... indices) noexcept {
    std::uint64_t state = master;
    std::uint64_t out = splitmix64_next(state);
    ((state ^= static_cast<std::uint64_t>(indices) + 0x9e3779b97f4a7c15ULL,
      out = splitmix64_next(state)),
     ...);
    return out;
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

} // namespace mfcomp
