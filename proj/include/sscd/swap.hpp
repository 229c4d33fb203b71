#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sscd/corpus.hpp"
#include "sscd/metrics.hpp"
#include "sscd/rng.hpp"

namespace sscd {

enum class SwapStrategy { random, centroid_distance, random_normalized, centroid_normalized };

std::string_view strategy_string(SwapStrategy s) noexcept;
SwapStrategy parse_strategy(std::string_view s);

struct CorpusSizes {
    std::uint64_t total1 = 0;
    std::uint64_t total2 = 0;

    bool operator==(const CorpusSizes&) const = default;
};

struct SwapConfig {
    double rate = 0.0;
    SwapStrategy strategy = SwapStrategy::random;
    /// Distance to the other side's centroid, centroid strategies only.
    Distance selection_metric = Distance::cosine;
    /// |C1| and |C2|, required by the normalized strategies.
    std::optional<CorpusSizes> corpus_sizes;

    void validate() const;
    bool normalized() const noexcept {
        return strategy == SwapStrategy::random_normalized || strategy == SwapStrategy::centroid_normalized;
    }
    bool by_centroid() const noexcept {
        return strategy == SwapStrategy::centroid_distance || strategy == SwapStrategy::centroid_normalized;
    }

    bool operator==(const SwapConfig&) const = default;
};

struct SwapOutcome {
    SiblingSet s1_swapped;
    SiblingSet s2_swapped;
    std::size_t n_swapped = 0;
    /// Rows taken out of s1 (moved to side 2) and out of s2 (moved to side 1),
    /// as row indices into the original sets, in selection order.
    std::vector<std::size_t> rows_from_s1;
    std::vector<std::size_t> rows_from_s2;
    std::vector<std::string> ids_from_s1;
    std::vector<std::string> ids_from_s2;
};

/// floor(rate * min(n1, n2)).
std::size_t swap_count(double rate, std::size_t n1, std::size_t n2);

/// Equal-size exchange computed on corpus-relative frequencies:
/// floor(rate * min(n1/total1, n2/total2) * min(total1, total2)),
/// capped at min(n1, n2).
std::size_t swap_count_normalized(double rate, std::size_t n1, std::size_t n2, std::uint64_t total1,
                                  std::uint64_t total2);

std::size_t swap_count(const SwapConfig& config, std::size_t n1, std::size_t n2);

/// Exchanges equally sized row subsets between s1 and s2. The swapped side 1
/// is the untouched rows of s1 in original order followed by the rows taken
/// from s2; symmetric for side 2.
///
/// random strategies sample without replacement from rng. centroid
/// strategies take the rows furthest (selection_metric) from the other
/// side's mean vector, ties broken by row index, and never touch rng.
SwapOutcome perform_swap(const SiblingSet& s1, const SiblingSet& s2, const SwapConfig& config,
                         RngStream& rng);

/// Row indices of `from`, ordered by descending distance to `centroid`
/// (stable on ties).
std::vector<std::size_t> rank_by_centroid_distance(const SiblingSet& from, std::span<const double> centroid,
                                                   Distance metric);

}  // namespace sscd
