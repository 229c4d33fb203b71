#include "sscd/rng.hpp"

namespace sscd {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view lemma_key, std::uint64_t index,
                          StreamPurpose purpose) noexcept {
    // FNV-1a over the lemma bytes.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : lemma_key) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t s = splitmix64(base);
    s = splitmix64(s ^ h);
    s = splitmix64(s ^ index);
    return splitmix64(s ^ static_cast<std::uint64_t>(purpose));
}

}  // namespace sscd
