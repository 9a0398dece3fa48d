#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mpprl {

// Finalizer from the splitmix64 generator; good avalanche behaviour.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Keyed 64-bit string hash: FNV-1a folded with the seed, then finalized.
// Stable across platforms and runs (unlike std::hash).
inline std::uint64_t hash_bytes(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix64(h);
}

// Derives independent named sub-streams from one root seed so that every
// randomized component (generation, corruption, ordering, blinding) is
// reproducible on its own.
class SeedStream {
  public:
    explicit SeedStream(std::uint64_t root) : root_(root) {}

    std::uint64_t derive(std::string_view name) const {
        return mix64(root_ ^ hash_bytes(name, 0x5bd1e995u));
    }

    std::uint64_t derive(std::string_view name, std::uint64_t index) const {
        return mix64(derive(name) ^ mix64(index));
    }

    std::uint64_t root() const { return root_; }

  private:
    std::uint64_t root_;
};

}  // namespace mpprl
