#include "sscd/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sscd/error.hpp"
#include "sscd/gaussian.hpp"
#include "sscd/parallel.hpp"

namespace sscd {

ChangeScore score_word(const SiblingSet& s1, const SiblingSet& s2, const MetricSpec& metric,
                       const SwapConfig& swap_cfg, std::size_t repetitions, std::uint64_t rng_base) {
    metric.validate();
    swap_cfg.validate();
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (s1.empty() || s2.empty()) {
        throw UnscorableError("'" + s1.lemma_key() + "' has no occurrences in " +
                              (s1.empty() ? s1.corpus_id() : s2.corpus_id()));
    }
    const std::string& lemma = s1.lemma_key();

    ChangeScore out;
    out.lemma_key = lemma;
    out.swap_rate = swap_cfg.rate;
    out.n_swapped = swap_count(swap_cfg, s1.size(), s2.size());

    const GaussianSummary g1 = fit_gaussian(s1);
    const GaussianSummary g2 = fit_gaussian(s2);
    {
        auto rng = make_stream(rng_base, lemma, 0, StreamPurpose::metric_original);
        out.e_original = score_gaussians(metric, g1, g2, rng);
    }

    out.per_rep.reserve(repetitions);
    double total = 0.0;
    for (std::size_t k = 0; k < repetitions; ++k) {
        auto swap_rng = make_stream(rng_base, lemma, k, StreamPurpose::swap);
        auto metric_rng = make_stream(rng_base, lemma, k, StreamPurpose::metric_swapped);
        const SwapOutcome swapped = perform_swap(s1, s2, swap_cfg, swap_rng);
        RepetitionScore rep;
        rep.e_swap = score_pair(metric, swapped.s1_swapped, swapped.s2_swapped, metric_rng);
        rep.score = std::abs(out.e_original - rep.e_swap);
        total += rep.score;
        out.per_rep.push_back(rep);
    }
    out.point_score = swap_cfg.rate == 0.0 ? out.e_original : total / double(repetitions);
    return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
    const double h = (double(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);
}

ConfidenceInterval bootstrap_ci(std::span<const double> values, double level, std::size_t resamples,
                                RngStream& rng) {
    if (values.size() < 2) throw std::invalid_argument("bootstrap needs at least 2 repetitions");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must be in (0, 1)");
    if (resamples < 1) throw std::invalid_argument("bootstrap needs at least 1 resample");

    const std::size_t n = values.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += values[pick(rng)];
        m = sum / double(n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level) / 2.0;
    return {quantile_sorted(means, alpha), quantile_sorted(means, 1.0 - alpha)};
}

ConfidenceInterval bootstrap_ci(const ChangeScore& score, double level, std::size_t resamples, RngStream& rng) {
    std::vector<double> values;
    values.reserve(score.per_rep.size());
    for (const auto& r : score.per_rep) values.push_back(r.score);
    return bootstrap_ci(values, level, resamples, rng);
}

BatchScores score_all(std::span<const WordPair> words, const MetricSpec& metric, const SwapConfig& swap_cfg,
                      std::size_t repetitions, std::uint64_t rng_base, const BatchOptions& options) {
    metric.validate();
    swap_cfg.validate();

    std::vector<std::optional<ChangeScore>> results(words.size());
    std::vector<std::string> reasons(words.size());
    parallel_for(words.size(), options.threads, [&](std::size_t i) {
        const WordPair& w = words[i];
        try {
            ChangeScore s = score_word(w.corpus1, w.corpus2, metric, swap_cfg, repetitions, rng_base);
            if (options.bootstrap && repetitions >= 2) {
                auto rng = make_stream(rng_base, w.lemma_key, 0, StreamPurpose::bootstrap);
                const auto ci = bootstrap_ci(s, options.bootstrap->level, options.bootstrap->resamples, rng);
                s.ci_low = ci.low;
                s.ci_high = ci.high;
            }
            results[i] = std::move(s);
        } catch (const UnscorableError& e) {
            reasons[i] = e.what();
        } catch (const DegenerateInputError& e) {
            reasons[i] = e.what();
        }
    });

    BatchScores out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (results[i]) {
            out.scores.push_back(std::move(*results[i]));
        } else {
            out.unscorable.push_back({words[i].lemma_key, reasons[i]});
        }
    }
    return out;
}

std::vector<double> default_rate_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
    return grid;
}

RateSearchResult estimate_swap_rate(std::span<const WordPair> words, const MetricSpec& metric,
                                    const SwapConfig& swap_template, std::span<const double> grid,
                                    std::size_t repetitions, std::uint64_t rng_base,
                                    const RateSearchOptions& options) {
    if (grid.empty()) throw std::invalid_argument("rate grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] <= 1.0)) throw std::invalid_argument("grid rates must lie in (0, 1]");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
    }
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");

    RateSearchResult out;
    out.grid.assign(grid.begin(), grid.end());

    // A word excluded at any rate is excluded at every rate, so all curve
    // points average the same word set.
    std::vector<BatchScores> batches;
    batches.reserve(grid.size());
    std::vector<bool> dropped(words.size(), false);
    for (double rate : grid) {
        SwapConfig cfg = swap_template;
        cfg.rate = rate;
        batches.push_back(score_all(words, metric, cfg, repetitions, rng_base, {options.threads, std::nullopt}));
        for (const auto& u : batches.back().unscorable) {
            for (std::size_t i = 0; i < words.size(); ++i) {
                if (words[i].lemma_key == u.lemma_key && !dropped[i]) {
                    dropped[i] = true;
                    out.excluded.push_back(u);
                }
            }
        }
    }
    auto is_dropped = [&](const std::string& lemma) {
        for (const auto& u : out.excluded) {
            if (u.lemma_key == lemma) return true;
        }
        return false;
    };

    out.n_words = words.size() - out.excluded.size();
    if (out.n_words == 0) throw UnscorableError("no scorable words for swap-rate search");

    std::vector<double> stderr_e(grid.size());
    for (const auto& batch : batches) {
        std::vector<double> rep_mean(repetitions, 0.0);
        for (const auto& s : batch.scores) {
            if (is_dropped(s.lemma_key)) continue;
            for (std::size_t k = 0; k < repetitions; ++k) rep_mean[k] += s.per_rep[k].e_swap;
        }
        double mean = 0.0;
        for (auto& m : rep_mean) {
            m /= double(out.n_words);
            mean += m;
        }
        mean /= double(repetitions);
        double ss = 0.0;
        for (double m : rep_mean) ss += (m - mean) * (m - mean);
        const double sd = repetitions > 1 ? std::sqrt(ss / double(repetitions - 1)) : 0.0;
        out.mean_e_swap.push_back(mean);
        out.std_e_swap.push_back(sd);
        stderr_e[out.mean_e_swap.size() - 1] = sd / std::sqrt(double(repetitions));
    }

    const auto best = std::min_element(out.mean_e_swap.begin(), out.mean_e_swap.end());
    const std::size_t best_i = std::size_t(best - out.mean_e_swap.begin());
    const double threshold = *best + options.tie_sigma * stderr_e[best_i];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (out.mean_e_swap[i] <= threshold) {
            out.estimated_rate = grid[i];
            break;
        }
    }
    return out;
}

}  // namespace sscd
