#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sscd/corpus.hpp"
#include "sscd/gaussian.hpp"
#include "sscd/scoring.hpp"

namespace sscd {

/// How corpus 2 differs from corpus 1 for a planted word.
///   stable      same Gaussian
///   mean_shift  mean displaced by `effect` in every dimension (random sign)
///   var_shift   variances scaled by (1 + effect)
///   sense_gain  mixture: weight `effect` on a new component displaced by
///               SynthSpec::sense_offset per dimension
enum class ChangeProfile { stable, mean_shift, var_shift, sense_gain };

std::string_view profile_string(ChangeProfile p) noexcept;
ChangeProfile parse_profile(std::string_view s);

struct PlantedWord {
    std::string lemma_key;
    ChangeProfile profile = ChangeProfile::stable;
    double effect = 0.0;
    /// Gold grade; the effect size when unset.
    std::optional<double> gold;
    /// Fixed occurrence counts; drawn log-uniformly when unset.
    std::optional<std::size_t> n1;
    std::optional<std::size_t> n2;

    double gold_score() const { return gold.value_or(profile == ChangeProfile::stable ? 0.0 : effect); }
};

struct SynthSpec {
    std::uint32_t dim = 16;
    std::size_t n_min = 50;
    std::size_t n_max = 500;
    std::vector<PlantedWord> words;
    std::uint64_t seed = 0;
    /// Base means are drawn N(0, base_mean_scale^2) per dimension, base
    /// variances uniformly from [0.5, 1.5].
    double base_mean_scale = 2.0;
    double sense_offset = 4.0;
    /// Corpus sizes |C1|, |C2|; 0 means 20 * n_max.
    std::uint64_t total1 = 0;
    std::uint64_t total2 = 0;

    void validate() const;
};

/// Generating Gaussians of one word. corpus2 is empty for sense_gain, whose
/// corpus-2 law is a mixture.
struct PlantedGenerators {
    GaussianSummary corpus1;
    std::optional<GaussianSummary> corpus2;
};

struct SynthBenchmark {
    CorpusManifest manifest1;
    CorpusManifest manifest2;
    std::vector<WordPair> words;
    std::vector<PlantedGenerators> generators;
    GoldRanking gold;
};

/// Deterministic in spec (including seed); each word draws from its own
/// keyed stream.
SynthBenchmark generate(const SynthSpec& spec);

/// Writes corpus1/, corpus2/ (manifest + sibling files), gold.tsv and
/// targets.txt under dir.
void write_benchmark(const SynthBenchmark& bench, const std::filesystem::path& dir);

SynthSpec stable_benchmark_spec(std::uint64_t seed, std::size_t n_words = 20);
/// Every word mean-shifted by delta.
SynthSpec shifted_benchmark_spec(std::uint64_t seed, std::size_t n_words, double delta);
/// n_stable stable words followed by per_delta mean-shifted words for each delta.
SynthSpec mixed_benchmark_spec(std::uint64_t seed, std::size_t n_stable = 20,
                               std::vector<double> deltas = {0.5, 1.0, 2.0, 4.0}, std::size_t per_delta = 5);
/// Mean-shifted words with fixed counts n_small < n_large. Swapping at rate
/// r leaves the two sides as identical mixtures exactly when
/// r = n_large / (n_small + n_large), so mean e_swap bottoms out there.
SynthSpec rate_minimum_spec(std::uint64_t seed, std::size_t n_words = 10, std::size_t n_small = 150,
                            std::size_t n_large = 350, double delta = 4.0);
double planted_rate_minimum(std::size_t n_small, std::size_t n_large);

SynthSpec synth_spec_from_json(std::string_view text);
std::string synth_spec_to_json(const SynthSpec& spec);

}  // namespace sscd
