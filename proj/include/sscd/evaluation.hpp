#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sscd/corpus.hpp"
#include "sscd/scoring.hpp"

namespace sscd {

enum class AggregationMode { pooled, per_seed_mean };

std::string_view aggregation_string(AggregationMode m) noexcept;
AggregationMode parse_aggregation(std::string_view s);

struct EvalReport {
    AggregationMode mode = AggregationMode::per_seed_mean;
    /// Headline value: pooled rho, or the mean of per-seed rhos.
    double spearman = 0.0;
    std::size_t n_words = 0;
    std::optional<std::vector<double>> per_seed_spearman;
    std::optional<double> mean_seed_spearman;
    /// Gold words without a score, excluded from rho.
    std::vector<std::string> excluded;
};

/// Average (fractional) ranks, 1-based; tied values share the mean of the
/// ranks they span.
std::vector<double> fractional_ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman's rho between scores and the gold grades of the lemmas common to
/// both. Throws DataError with fewer than 2 common lemmas or when either
/// side has zero rank variance.
double spearman_rho(std::span<const std::pair<std::string, double>> scores, const GoldRanking& gold);

/// pooled: one rho on point scores. per_seed_mean: rho per repetition index
/// across words, then averaged. Words scored with swap rate 0 contribute
/// their point score to every repetition.
EvalReport evaluate_run(std::span<const ChangeScore> scores, const GoldRanking& gold, AggregationMode mode);

struct SweepCell {
    std::string metric;
    double rate = 0.0;
    double spearman = 0.0;
};

struct RateCurve {
    std::string metric;
    RateSearchResult result;
};

/// CSV: one row per metric, one column per rate, then best_rate and
/// best_spearman (argmax of the row, ties to the smaller rate).
std::string render_spearman_table(std::span<const SweepCell> cells);
/// Markdown version of the same matrix with each row's best cell in bold.
std::string render_spearman_markdown(std::span<const SweepCell> cells);
/// CSV `metric,rate,mean_e_swap,std_e_swap`, plot-ready.
std::string render_rate_curves(std::span<const RateCurve> curves);

/// Writes spearman_table.csv, spearman_table.md and rate_curve.csv.
void render_tables(std::span<const SweepCell> cells, std::span<const RateCurve> curves,
                   const std::filesystem::path& out_dir);

}  // namespace sscd
