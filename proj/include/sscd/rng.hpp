#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sscd {

using RngStream = std::mt19937_64;

/// What a derived stream is used for. Streams for different purposes of the
/// same (word, repetition) never coincide.
enum class StreamPurpose : std::uint64_t {
    swap = 1,
    metric_original = 2,
    metric_swapped = 3,
    bootstrap = 4,
    synth = 5,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed keyed on (base, lemma, index, purpose). Results depend only on the
/// key, so work may run in any order or on any number of threads.
std::uint64_t derive_seed(std::uint64_t base, std::string_view lemma_key, std::uint64_t index,
                          StreamPurpose purpose) noexcept;

inline RngStream make_stream(std::uint64_t base, std::string_view lemma_key, std::uint64_t index,
                             StreamPurpose purpose) {
    return RngStream(derive_seed(base, lemma_key, index, purpose));
}

}  // namespace sscd
