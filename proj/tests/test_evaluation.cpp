#include <doctest.h>

#include <cmath>
#include <random>

#include "sscd/error.hpp"
#include "sscd/evaluation.hpp"
#include "sscd/text.hpp"
#include "support.hpp"

using namespace sscd;
using sscd::testing::brute_force_ranks;
using sscd::testing::TempDir;

namespace {

GoldRanking gold_of(const std::vector<double>& values) {
    GoldRanking g;
    for (std::size_t i = 0; i < values.size(); ++i) g.entries.push_back({"w" + std::to_string(i), values[i], {}});
    return g;
}

std::vector<std::pair<std::string, double>> scores_of(const std::vector<double>& values) {
    std::vector<std::pair<std::string, double>> s;
    for (std::size_t i = 0; i < values.size(); ++i) s.emplace_back("w" + std::to_string(i), values[i]);
    return s;
}

ChangeScore with_reps(std::string lemma, std::vector<double> reps) {
    ChangeScore s;
    s.lemma_key = std::move(lemma);
    s.swap_rate = 0.4;
    double total = 0;
    for (double r : reps) {
        s.per_rep.push_back({r, r});
        total += r;
    }
    s.point_score = total / double(reps.size());
    return s;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    for (auto l : split(text, '\n')) {
        if (!l.empty()) out.emplace_back(l);
    }
    return out;
}

}  // namespace

TEST_CASE("fractional ranks average ties") {
    CHECK(fractional_ranks(std::vector<double>{1, 1, 2}) == std::vector<double>{1.5, 1.5, 3});
    CHECK(fractional_ranks(std::vector<double>{3, 1, 3, 3}) == std::vector<double>{3, 1, 3, 3});
    CHECK(fractional_ranks(std::vector<double>{}).empty());
}

TEST_CASE("fractional ranks match brute force on random small lists") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        const auto k = std::uniform_int_distribution<int>(1, 4)(rng);
        std::vector<double> v(n);
        for (auto& x : v) x = std::uniform_int_distribution<int>(1, k)(rng);
        CHECK(fractional_ranks(v) == brute_force_ranks(v));
    }
}

TEST_CASE("spearman hand values") {
    const auto gold = gold_of({1, 2, 3});
    CHECK(spearman_rho(scores_of({1, 2, 3}), gold) == doctest::Approx(1.0));
    CHECK(spearman_rho(scores_of({3, 2, 1}), gold) == doctest::Approx(-1.0));
    CHECK(spearman_rho(scores_of({1, 1, 2}), gold) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("spearman properties") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = std::uniform_int_distribution<std::size_t>(3, 30)(rng);
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = z(rng);
        for (auto& v : y) v = z(rng);
        const auto gold = gold_of(x);
        CHECK(spearman_rho(scores_of(x), gold) == doctest::Approx(1.0).epsilon(1e-12));
        std::vector<double> neg(n), ex(n), aff(n);
        for (std::size_t i = 0; i < n; ++i) {
            neg[i] = -x[i];
            ex[i] = std::exp(y[i]);
            aff[i] = 3.0 * y[i] + 7.0;
        }
        CHECK(spearman_rho(scores_of(neg), gold) == doctest::Approx(-1.0).epsilon(1e-12));
        const double base = spearman_rho(scores_of(y), gold);
        CHECK(spearman_rho(scores_of(ex), gold) == doctest::Approx(base).epsilon(1e-12));
        CHECK(spearman_rho(scores_of(aff), gold) == doctest::Approx(base).epsilon(1e-12));
        CHECK(std::abs(base) <= 1.0);
    }
}

TEST_CASE("spearman errors") {
    CHECK_THROWS_AS(spearman_rho(scores_of({1}), gold_of({1, 2})), DataError);
    CHECK_THROWS_AS(spearman_rho({{{"x", 1.0}, {"y", 2.0}}}, gold_of({1, 2})), DataError);
    CHECK_THROWS_AS(spearman_rho(scores_of({1, 1, 1}), gold_of({1, 2, 3})), DataError);
    CHECK_THROWS_AS(spearman_rho(scores_of({1, 2, 3}), gold_of({5, 5, 5})), DataError);
}

TEST_CASE("per-seed and pooled aggregation differ on a constructed case") {
    const auto gold = gold_of({1, 2, 3, 4});
    // Seed 0 ranks the words (1,2,3,4), seed 1 ranks them (2,4,1,3).
    const std::vector<ChangeScore> scores = {with_reps("w0", {1, 2}), with_reps("w1", {2, 4}),
                                             with_reps("w2", {3, 1}), with_reps("w3", {4, 3})};
    const EvalReport per_seed = evaluate_run(scores, gold, AggregationMode::per_seed_mean);
    REQUIRE(per_seed.per_seed_spearman.has_value());
    CHECK((*per_seed.per_seed_spearman)[0] == doctest::Approx(1.0));
    CHECK((*per_seed.per_seed_spearman)[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(per_seed.spearman == doctest::Approx(0.5));
    CHECK(per_seed.mean_seed_spearman == per_seed.spearman);

    // Point scores (1.5, 3, 2, 3.5) rank (1, 3, 2, 4): rho = 1 - 6*2/60.
    const EvalReport pooled = evaluate_run(scores, gold, AggregationMode::pooled);
    CHECK(pooled.spearman == doctest::Approx(0.8));
    CHECK_FALSE(pooled.per_seed_spearman.has_value());
    CHECK(pooled.n_words == 4);
}

TEST_CASE("single repetition makes both modes agree") {
    const auto gold = gold_of({1, 2, 3, 4});
    const std::vector<ChangeScore> scores = {with_reps("w0", {0.3}), with_reps("w1", {0.1}),
                                             with_reps("w2", {0.9}), with_reps("w3", {0.5})};
    CHECK(evaluate_run(scores, gold, AggregationMode::per_seed_mean).spearman ==
          doctest::Approx(evaluate_run(scores, gold, AggregationMode::pooled).spearman));
}

TEST_CASE("rate 0 scores rank by point score in every mode") {
    const auto gold = gold_of({1, 2, 3});
    std::vector<ChangeScore> scores(3);
    for (std::size_t i = 0; i < 3; ++i) {
        scores[i].lemma_key = "w" + std::to_string(i);
        scores[i].swap_rate = 0.0;
        scores[i].point_score = scores[i].e_original = double(i);
    }
    CHECK(evaluate_run(scores, gold, AggregationMode::per_seed_mean).spearman == doctest::Approx(1.0));
}

TEST_CASE("gold words without scores are excluded and listed") {
    const auto gold = gold_of({1, 2, 3, 4});
    const std::vector<ChangeScore> scores = {with_reps("w0", {1}), with_reps("w2", {2}), with_reps("w3", {3}),
                                             with_reps("extra", {9})};
    const EvalReport r = evaluate_run(scores, gold, AggregationMode::pooled);
    CHECK(r.n_words == 3);
    CHECK(r.excluded == std::vector<std::string>{"w1"});
    CHECK(r.spearman == doctest::Approx(1.0));
    const std::vector<ChangeScore> ragged = {with_reps("w0", {1, 2}), with_reps("w1", {1})};
    CHECK_THROWS_AS(evaluate_run(ragged, gold, AggregationMode::per_seed_mean), DataError);
}

TEST_CASE("spearman table shape and best column") {
    std::vector<SweepCell> cells;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const char* metrics[] = {"kl12", "kl21", "jeffreys", "mean:braycurtis", "mean:canberra", "mean:chebyshev",
                             "mean:cityblock", "mean:correlation", "mean:cosine", "mean:euclidean"};
    for (const char* m : metrics) {
        for (int r = 1; r <= 9; ++r) cells.push_back({m, r / 10.0, u(rng)});
    }
    const auto lines = lines_of(render_spearman_table(cells));
    REQUIRE(lines.size() == 11);
    CHECK(lines[0] == "metric,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,best_rate,best_spearman");
    for (std::size_t m = 0; m < 10; ++m) {
        const auto fields = split(lines[m + 1], ',');
        REQUIRE(fields.size() == 12);
        CHECK(fields[0] == metrics[m]);
        std::size_t arg = 0;
        for (std::size_t r = 1; r < 9; ++r) {
            if (cells[m * 9 + r].spearman > cells[m * 9 + arg].spearman) arg = r;
        }
        CHECK(fields[10] == format_rate(cells[m * 9 + arg].rate));
        CHECK(fields[11] == format_fixed(cells[m * 9 + arg].spearman));
        CHECK(parse_double(fields[1]) == doctest::Approx(cells[m * 9].spearman).epsilon(1e-6));
    }
    const auto md = lines_of(render_spearman_markdown(cells));
    CHECK(md.size() == 12);
    CHECK(md[2].find("**") != std::string::npos);
}

TEST_CASE("best rate ties go to the smaller rate") {
    const std::vector<SweepCell> cells = {{"kl12", 0.6, 0.5}, {"kl12", 0.2, 0.5}, {"kl12", 0.4, 0.1}};
    const auto lines = lines_of(render_spearman_table(cells));
    CHECK(lines[1] == "kl12,0.500000,0.100000,0.500000,0.2,0.500000");
}

TEST_CASE("empty reports give header-only files") {
    TempDir tmp;
    render_tables({}, {}, tmp.path());
    CHECK(read_text_file((tmp / "spearman_table.csv").string()) == "metric,best_rate,best_spearman\n");
    CHECK(read_text_file((tmp / "rate_curve.csv").string()) == "metric,rate,mean_e_swap,std_e_swap\n");
    CHECK(lines_of(read_text_file((tmp / "spearman_table.md").string())).size() == 2);
}

TEST_CASE("rate curve CSV lists every grid point") {
    RateCurve c;
    c.metric = "kl12";
    c.result.grid = {0.1, 0.5};
    c.result.mean_e_swap = {0.25, 0.125};
    c.result.std_e_swap = {0.5, 0.0};
    const std::vector<RateCurve> curves = {c};
    CHECK(render_rate_curves(curves) == "metric,rate,mean_e_swap,std_e_swap\nkl12,0.1,0.25,0.5\nkl12,0.5,0.125,0\n");
    CHECK(parse_aggregation("pooled") == AggregationMode::pooled);
    CHECK(parse_aggregation("per-seed") == AggregationMode::per_seed_mean);
    CHECK_THROWS(parse_aggregation("median"));
}
