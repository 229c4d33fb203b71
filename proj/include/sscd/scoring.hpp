#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sscd/corpus.hpp"
#include "sscd/metrics.hpp"
#include "sscd/rng.hpp"
#include "sscd/swap.hpp"

namespace sscd {

inline constexpr std::size_t kDefaultRepetitions = 20;

struct RepetitionScore {
    double e_swap = 0.0;
    double score = 0.0;  ///< |e_original - e_swap|
};

struct ChangeScore {
    std::string lemma_key;
    double e_original = 0.0;
    std::vector<RepetitionScore> per_rep;
    /// Mean of per_rep scores; e_original itself when the swap rate is 0.
    double point_score = 0.0;
    double swap_rate = 0.0;
    std::size_t n_swapped = 0;  ///< rows exchanged per repetition
    std::optional<double> ci_low;
    std::optional<double> ci_high;
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

struct BootstrapOptions {
    double level = 0.95;
    std::size_t resamples = 1000;
};

/// Semantic change score of one word. Repetition k draws its swap from the
/// stream keyed (rng_base, lemma, k), so changing one repetition's stream
/// leaves the others untouched.
ChangeScore score_word(const SiblingSet& s1, const SiblingSet& s2, const MetricSpec& metric,
                       const SwapConfig& swap_cfg, std::size_t repetitions, std::uint64_t rng_base);

/// Percentile bootstrap over per-repetition scores.
ConfidenceInterval bootstrap_ci(std::span<const double> values, double level, std::size_t resamples,
                                RngStream& rng);
ConfidenceInterval bootstrap_ci(const ChangeScore& score, double level, std::size_t resamples, RngStream& rng);

/// Type-7 (linear interpolation) empirical quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

struct WordPair {
    std::string lemma_key;
    SiblingSet corpus1;
    SiblingSet corpus2;
};

struct UnscorableWord {
    std::string lemma_key;
    std::string reason;
};

struct BatchScores {
    std::vector<ChangeScore> scores;  ///< input order, unscorable words omitted
    std::vector<UnscorableWord> unscorable;
};

struct BatchOptions {
    std::size_t threads = 1;
    std::optional<BootstrapOptions> bootstrap;
};

/// score_word over a batch. Words that cannot be scored (no occurrences,
/// undefined distance) are reported, never abort the batch. Output is
/// identical for any thread count.
BatchScores score_all(std::span<const WordPair> words, const MetricSpec& metric, const SwapConfig& swap_cfg,
                      std::size_t repetitions, std::uint64_t rng_base, const BatchOptions& options = {});

struct RateSearchResult {
    std::vector<double> grid;
    std::vector<double> mean_e_swap;  ///< over words x repetitions, per rate
    std::vector<double> std_e_swap;   ///< across repetitions of the per-repetition word mean
    double estimated_rate = 0.0;
    std::size_t n_words = 0;
    std::vector<UnscorableWord> excluded;
};

struct RateSearchOptions {
    std::size_t threads = 1;
    /// Rates whose mean e_swap lies within tie_sigma standard errors of the
    /// minimum count as tied with it; the smallest tied rate wins. 0 means
    /// exact ties only.
    double tie_sigma = 0.0;
};

std::vector<double> default_rate_grid();

/// Unsupervised swap-rate estimate: the grid rate minimising the mean
/// post-swap metric value e_swap. The swap template's rate is ignored.
RateSearchResult estimate_swap_rate(std::span<const WordPair> words, const MetricSpec& metric,
                                    const SwapConfig& swap_template, std::span<const double> grid,
                                    std::size_t repetitions, std::uint64_t rng_base,
                                    const RateSearchOptions& options = {});

}  // namespace sscd
