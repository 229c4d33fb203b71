#pragma once

#include <vector>

#include "sscd/corpus.hpp"

namespace sscd {

inline constexpr double kVarianceFloor = 1e-6;

/// Diagonal-covariance Gaussian fitted to a sibling set.
struct GaussianSummary {
    std::vector<double> mean;
    std::vector<double> var;  ///< diagonal of the covariance, each entry >= kVarianceFloor

    std::size_t dim() const noexcept { return mean.size(); }

    bool operator==(const GaussianSummary&) const = default;
};

/// Column means and unbiased per-dimension variances, floored at
/// kVarianceFloor. A single row yields the floor in every dimension.
/// Throws UnscorableError for an empty set.
///
/// Each column is accumulated in sorted order, so the result is
/// bit-identical under any permutation of the rows.
GaussianSummary fit_gaussian(const SiblingSet& siblings);

}  // namespace sscd
