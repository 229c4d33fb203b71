#include "sscd/swap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sscd/error.hpp"
#include "sscd/gaussian.hpp"

namespace sscd {

namespace {

// Products like 0.7 * 90 land a few ulps below the integer they denote.
constexpr double kFloorSlack = 1e-9;

std::size_t floor_count(double x) { return static_cast<std::size_t>(std::floor(x + kFloorSlack)); }

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, RngStream& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(k);
    return idx;
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> taken) {
    std::vector<bool> mask(n, false);
    for (std::size_t i : taken) mask[i] = true;
    std::vector<std::size_t> rest;
    rest.reserve(n - taken.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) rest.push_back(i);
    }
    return rest;
}

SiblingSet assemble(const SiblingSet& own, std::span<const std::size_t> keep, const SiblingSet& other,
                    std::span<const std::size_t> incoming) {
    const std::size_t d = own.dim();
    std::vector<float> values;
    values.reserve((keep.size() + incoming.size()) * d);
    std::vector<std::string> ids;
    ids.reserve(keep.size() + incoming.size());
    for (std::size_t r : keep) {
        auto row = own.row(r);
        values.insert(values.end(), row.begin(), row.end());
        ids.push_back(own.sentence_ids()[r]);
    }
    for (std::size_t r : incoming) {
        auto row = other.row(r);
        values.insert(values.end(), row.begin(), row.end());
        ids.push_back(other.sentence_ids()[r]);
    }
    return SiblingSet(own.lemma_key(), own.corpus_id(), d, std::move(values), std::move(ids));
}

}  // namespace

std::string_view strategy_string(SwapStrategy s) noexcept {
    switch (s) {
        case SwapStrategy::random: return "random";
        case SwapStrategy::centroid_distance: return "centroid";
        case SwapStrategy::random_normalized: return "random-normalized";
        case SwapStrategy::centroid_normalized: return "centroid-normalized";
    }
    return "?";
}

SwapStrategy parse_strategy(std::string_view s) {
    if (s == "random" || s == "rand") return SwapStrategy::random;
    if (s == "centroid" || s == "dist" || s == "centroid_distance") return SwapStrategy::centroid_distance;
    if (s == "random-normalized" || s == "random_normalized") return SwapStrategy::random_normalized;
    if (s == "centroid-normalized" || s == "centroid_normalized") return SwapStrategy::centroid_normalized;
    throw std::invalid_argument("unknown swap strategy '" + std::string(s) + "'");
}

void SwapConfig::validate() const {
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("swap rate must be in [0, 1]");
    if (normalized()) {
        if (!corpus_sizes || corpus_sizes->total1 < 1 || corpus_sizes->total2 < 1) {
            throw std::invalid_argument("normalized swap strategies need corpus sizes >= 1");
        }
    }
}

std::size_t swap_count(double rate, std::size_t n1, std::size_t n2) {
    return floor_count(rate * double(std::min(n1, n2)));
}

std::size_t swap_count_normalized(double rate, std::size_t n1, std::size_t n2, std::uint64_t total1,
                                  std::uint64_t total2) {
    if (total1 < 1 || total2 < 1) throw std::invalid_argument("corpus sizes must be >= 1");
    const double f1 = double(n1) / double(total1);
    const double f2 = double(n2) / double(total2);
    const double base = double(std::min(total1, total2));
    return std::min(floor_count(rate * std::min(f1, f2) * base), std::min(n1, n2));
}

std::size_t swap_count(const SwapConfig& config, std::size_t n1, std::size_t n2) {
    if (config.normalized()) {
        config.validate();
        return swap_count_normalized(config.rate, n1, n2, config.corpus_sizes->total1,
                                     config.corpus_sizes->total2);
    }
    return swap_count(config.rate, n1, n2);
}

std::vector<std::size_t> rank_by_centroid_distance(const SiblingSet& from, std::span<const double> centroid,
                                                   Distance metric) {
    const std::size_t n = from.size();
    std::vector<double> dist(n);
    std::vector<double> buf(from.dim());
    for (std::size_t i = 0; i < n; ++i) {
        auto row = from.row(i);
        std::copy(row.begin(), row.end(), buf.begin());
        dist[i] = vector_distance(metric, buf, centroid);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
    return order;
}

SwapOutcome perform_swap(const SiblingSet& s1, const SiblingSet& s2, const SwapConfig& config, RngStream& rng) {
    config.validate();
    if (s1.empty() || s2.empty()) {
        throw UnscorableError("cannot swap contexts of '" + s1.lemma_key() + "': empty sibling set");
    }
    if (s1.dim() != s2.dim()) {
        throw DimensionMismatch("sibling sets differ in dimension: " + std::to_string(s1.dim()) + " vs " +
                                std::to_string(s2.dim()));
    }

    SwapOutcome out;
    out.n_swapped = swap_count(config, s1.size(), s2.size());
    if (out.n_swapped == 0) {
        out.s1_swapped = s1;
        out.s2_swapped = s2;
        return out;
    }

    if (config.by_centroid()) {
        const auto c1 = fit_gaussian(s1).mean;
        const auto c2 = fit_gaussian(s2).mean;
        out.rows_from_s1 = rank_by_centroid_distance(s1, c2, config.selection_metric);
        out.rows_from_s2 = rank_by_centroid_distance(s2, c1, config.selection_metric);
        out.rows_from_s1.resize(out.n_swapped);
        out.rows_from_s2.resize(out.n_swapped);
    } else {
        out.rows_from_s1 = sample_without_replacement(s1.size(), out.n_swapped, rng);
        out.rows_from_s2 = sample_without_replacement(s2.size(), out.n_swapped, rng);
    }

    const auto keep1 = complement(s1.size(), out.rows_from_s1);
    const auto keep2 = complement(s2.size(), out.rows_from_s2);
    out.s1_swapped = assemble(s1, keep1, s2, out.rows_from_s2);
    out.s2_swapped = assemble(s2, keep2, s1, out.rows_from_s1);
    for (std::size_t r : out.rows_from_s1) out.ids_from_s1.push_back(s1.sentence_ids()[r]);
    for (std::size_t r : out.rows_from_s2) out.ids_from_s2.push_back(s2.sentence_ids()[r]);
    return out;
}

}  // namespace sscd
