#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sscd/corpus.hpp"
#include "sscd/evaluation.hpp"
#include "sscd/metrics.hpp"
#include "sscd/scoring.hpp"
#include "sscd/swap.hpp"

namespace sscd::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitDataError = 2,
    kExitStrictUnscorable = 3,
};

struct RunConfig {
    std::string corpus1;
    std::string corpus2;
    std::string targets;
    std::string gold;
    GoldFormat gold_format = GoldFormat::semeval_graded;
    /// Metric names as given ("kl12", "cosine", ...). `family` applies to
    /// all of them; empty means divergences as div and distances as mean.
    std::vector<std::string> metrics = {"kl12"};
    std::string family;
    std::size_t dscd_samples = kDefaultDscdSamples;
    double swap_rate = 0.4;
    SwapStrategy strategy = SwapStrategy::random;
    Distance selection_metric = Distance::cosine;
    std::size_t repetitions = kDefaultRepetitions;
    std::vector<double> grid = default_rate_grid();
    std::uint64_t seed = 0;
    std::string out_dir;
    AggregationMode aggregation = AggregationMode::per_seed_mean;
    bool strict = false;
    std::size_t threads = 1;
    bool bootstrap = true;
    double ci_level = 0.95;
    std::size_t ci_resamples = 1000;
    double tie_sigma = 0.0;
    std::string scores;
    std::string per_rep;

    std::vector<MetricSpec> metric_specs() const;
    void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Fields missing from `j` keep their value in `base`. Accepts either a bare
/// config object or a full run record (uses its "config" member).
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

int cmd_score(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_rate_search(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct SynthOptions {
    std::string preset = "mixed";  ///< mixed | stable | shifted | rate-minimum
    std::string spec_file;
    std::uint64_t seed = 0;
    std::uint32_t dim = 16;
    std::size_t n_min = 50;
    std::size_t n_max = 500;
    std::size_t words = 20;
    double delta = 2.0;
    std::string out_dir;
};

int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err);
int cmd_inspect(const std::filesystem::path& path, std::size_t rows, std::ostream& out, std::ostream& err);

/// Full command-line entry point: `sscd <subcommand> [options]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Loads word pairs for the given targets (or, without a targets file, the
/// words listed in both manifests). Targets missing from a manifest get an
/// empty sibling set.
std::vector<WordPair> load_word_pairs(const Corpus& c1, const Corpus& c2, const std::string& targets_file);

std::string render_scores_csv(const BatchScores& batch);
std::string render_per_rep_csv(const BatchScores& batch);
/// Reads a scores CSV (and optionally per-repetition CSV) back into scores.
std::vector<ChangeScore> read_scores(const std::string& scores_csv, const std::string& per_rep_csv);

}  // namespace sscd::cli
