#include "sscd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "sscd/error.hpp"
#include "sscd/text.hpp"

namespace sscd {

std::string_view aggregation_string(AggregationMode m) noexcept {
    return m == AggregationMode::pooled ? "pooled" : "per-seed";
}

AggregationMode parse_aggregation(std::string_view s) {
    if (s == "pooled") return AggregationMode::pooled;
    if (s == "per-seed" || s == "per_seed" || s == "per_seed_mean") return AggregationMode::per_seed_mean;
    throw std::invalid_argument("unknown aggregation mode '" + std::string(s) + "'");
}

std::vector<double> fractional_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // Positions i..j-1 hold equal values; 1-based ranks i+1..j.
        const double avg = (double(i + 1) + double(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DataError("pearson needs two equal-length series of >= 2");
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DataError("correlation undefined: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_rho(std::span<const std::pair<std::string, double>> scores, const GoldRanking& gold) {
    std::vector<double> predicted, truth;
    for (const auto& [lemma, value] : scores) {
        if (const GoldEntry* g = gold.find(lemma)) {
            predicted.push_back(value);
            truth.push_back(g->graded_score);
        }
    }
    if (predicted.size() < 2) {
        throw DataError("Spearman needs at least 2 lemmas shared by scores and gold, found " +
                        std::to_string(predicted.size()));
    }
    const auto rp = fractional_ranks(predicted);
    const auto rt = fractional_ranks(truth);
    try {
        return pearson(rp, rt);
    } catch (const DataError&) {
        throw DataError("Spearman undefined: all ranks tied on one side");
    }
}

EvalReport evaluate_run(std::span<const ChangeScore> scores, const GoldRanking& gold, AggregationMode mode) {
    EvalReport report;
    report.mode = mode;

    std::vector<const ChangeScore*> used;
    for (const auto& s : scores) {
        if (gold.find(s.lemma_key)) used.push_back(&s);
    }
    for (const auto& g : gold.entries) {
        const bool scored = std::any_of(used.begin(), used.end(),
                                        [&](const ChangeScore* s) { return s->lemma_key == g.lemma_key; });
        if (!scored) report.excluded.push_back(g.lemma_key);
    }
    report.n_words = used.size();

    std::vector<std::pair<std::string, double>> pooled;
    for (const ChangeScore* s : used) pooled.emplace_back(s->lemma_key, s->point_score);

    if (mode == AggregationMode::pooled) {
        report.spearman = spearman_rho(pooled, gold);
        return report;
    }

    std::size_t reps = 0;
    for (const ChangeScore* s : used) {
        if (s->swap_rate == 0.0) continue;
        if (reps == 0) reps = s->per_rep.size();
        if (s->per_rep.size() != reps || reps == 0) {
            throw DataError("per-seed evaluation needs the same number of repetitions for every word");
        }
    }
    if (reps == 0) {
        // Nothing was swapped: every seed ranks by e_original.
        reps = 1;
    }
    std::vector<double> per_seed;
    for (std::size_t k = 0; k < reps; ++k) {
        std::vector<std::pair<std::string, double>> seed_scores;
        for (const ChangeScore* s : used) {
            seed_scores.emplace_back(s->lemma_key, s->swap_rate == 0.0 ? s->point_score : s->per_rep[k].score);
        }
        per_seed.push_back(spearman_rho(seed_scores, gold));
    }
    const double mean = std::accumulate(per_seed.begin(), per_seed.end(), 0.0) / double(per_seed.size());
    report.per_seed_spearman = std::move(per_seed);
    report.mean_seed_spearman = mean;
    report.spearman = mean;
    return report;
}

// ---- tables ----------------------------------------------------------------

namespace {

struct Matrix {
    std::vector<std::string> metrics;
    std::vector<double> rates;
    std::map<std::pair<std::size_t, std::size_t>, double> cells;

    explicit Matrix(std::span<const SweepCell> in) {
        for (const auto& c : in) {
            if (std::find(metrics.begin(), metrics.end(), c.metric) == metrics.end()) metrics.push_back(c.metric);
            if (std::find(rates.begin(), rates.end(), c.rate) == rates.end()) rates.push_back(c.rate);
        }
        std::sort(rates.begin(), rates.end());
        for (const auto& c : in) {
            const auto m = std::size_t(std::find(metrics.begin(), metrics.end(), c.metric) - metrics.begin());
            const auto r = std::size_t(std::find(rates.begin(), rates.end(), c.rate) - rates.begin());
            cells[{m, r}] = c.spearman;
        }
    }

    std::optional<std::size_t> best(std::size_t m) const {
        std::optional<std::size_t> arg;
        for (std::size_t r = 0; r < rates.size(); ++r) {
            auto it = cells.find({m, r});
            if (it == cells.end()) continue;
            if (!arg || it->second > cells.at({m, *arg})) arg = r;
        }
        return arg;
    }
};

}  // namespace

std::string render_spearman_table(std::span<const SweepCell> cells) {
    const Matrix mx(cells);
    std::ostringstream out;
    out << "metric";
    for (double r : mx.rates) out << ',' << format_rate(r);
    out << ",best_rate,best_spearman\n";
    for (std::size_t m = 0; m < mx.metrics.size(); ++m) {
        out << mx.metrics[m];
        for (std::size_t r = 0; r < mx.rates.size(); ++r) {
            out << ',';
            if (auto it = mx.cells.find({m, r}); it != mx.cells.end()) out << format_fixed(it->second);
        }
        const auto b = mx.best(m);
        out << ',' << (b ? format_rate(mx.rates[*b]) : "") << ',' << (b ? format_fixed(mx.cells.at({m, *b})) : "")
            << '\n';
    }
    return out.str();
}

std::string render_spearman_markdown(std::span<const SweepCell> cells) {
    const Matrix mx(cells);
    std::ostringstream out;
    out << "| metric |";
    for (double r : mx.rates) out << ' ' << format_rate(r) << " |";
    out << "\n|---|";
    for (std::size_t r = 0; r < mx.rates.size(); ++r) out << "---:|";
    out << '\n';
    for (std::size_t m = 0; m < mx.metrics.size(); ++m) {
        const auto b = mx.best(m);
        out << "| " << mx.metrics[m] << " |";
        for (std::size_t r = 0; r < mx.rates.size(); ++r) {
            out << ' ';
            if (auto it = mx.cells.find({m, r}); it != mx.cells.end()) {
                const std::string v = format_fixed(it->second);
                out << (b && *b == r ? "**" + v + "**" : v);
            }
            out << " |";
        }
        out << '\n';
    }
    return out.str();
}

std::string render_rate_curves(std::span<const RateCurve> curves) {
    std::ostringstream out;
    out << "metric,rate,mean_e_swap,std_e_swap\n";
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.result.grid.size(); ++i) {
            out << c.metric << ',' << format_rate(c.result.grid[i]) << ',' << format_real(c.result.mean_e_swap[i])
                << ',' << format_real(c.result.std_e_swap[i]) << '\n';
        }
    }
    return out.str();
}

void render_tables(std::span<const SweepCell> cells, std::span<const RateCurve> curves,
                   const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_text_file((out_dir / "spearman_table.csv").string(), render_spearman_table(cells));
    write_text_file((out_dir / "spearman_table.md").string(), render_spearman_markdown(cells));
    write_text_file((out_dir / "rate_curve.csv").string(), render_rate_curves(curves));
}

}  // namespace sscd
