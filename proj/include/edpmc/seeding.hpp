#pragma once

#include <cstdint>
#include <random>

namespace edpmc {

// splitmix64 step (Vigna's public-domain mixer). Used for all seed
// derivation so that sub-streams never share state with the master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and a list of
// integer tags (trial index, column index, ...). Order-sensitive.
template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t master, Tags... tags) {
    std::uint64_t state = master;
    std::uint64_t out = splitmix64(state);
    ((state ^= static_cast<std::uint64_t>(tags) + 0x9e3779b97f4a7c15ULL,
      out = splitmix64(state)),
     ...);
    return out;
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

}  // namespace edpmc
