#include "sscd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "sscd/error.hpp"
#include "sscd/rng.hpp"
#include "sscd/text.hpp"

namespace sscd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string word_key(std::size_t i) {
    std::string n = std::to_string(i);
    return "w" + (n.size() < 2 ? "0" + n : n);
}

PlantedWord planted(std::string key, ChangeProfile profile, double effect) {
    PlantedWord w;
    w.lemma_key = std::move(key);
    w.profile = profile;
    w.effect = effect;
    return w;
}

std::size_t log_uniform_count(std::size_t lo, std::size_t hi, RngStream& rng) {
    if (lo == hi) return lo;
    std::uniform_real_distribution<double> u(std::log(double(lo)), std::log(double(hi)));
    const auto n = static_cast<std::size_t>(std::llround(std::exp(u(rng))));
    return std::clamp(n, lo, hi);
}

std::vector<float> sample_rows(const GaussianSummary& g, std::size_t n, RngStream& rng) {
    const std::size_t d = g.dim();
    std::vector<float> out(n * d);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out[i * d + j] = static_cast<float>(g.mean[j] + std::sqrt(g.var[j]) * normal(rng));
        }
    }
    return out;
}

std::vector<std::string> sentence_ids(std::string_view corpus, std::string_view lemma, std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(std::string(corpus) + ":" + std::string(lemma) + ":" + std::to_string(i));
    }
    return ids;
}

}  // namespace

std::string_view profile_string(ChangeProfile p) noexcept {
    switch (p) {
        case ChangeProfile::stable: return "stable";
        case ChangeProfile::mean_shift: return "mean_shift";
        case ChangeProfile::var_shift: return "var_shift";
        case ChangeProfile::sense_gain: return "sense_gain";
    }
    return "?";
}

ChangeProfile parse_profile(std::string_view s) {
    for (auto p : {ChangeProfile::stable, ChangeProfile::mean_shift, ChangeProfile::var_shift,
                   ChangeProfile::sense_gain}) {
        if (profile_string(p) == s) return p;
    }
    throw std::invalid_argument("unknown change profile '" + std::string(s) + "'");
}

void SynthSpec::validate() const {
    if (dim == 0) throw std::invalid_argument("synth dim must be > 0");
    if (n_min < 1 || n_min > n_max) throw std::invalid_argument("synth needs 1 <= n_min <= n_max");
    std::set<std::string> keys;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (w.lemma_key.empty() || !keys.insert(w.lemma_key).second) {
            throw std::invalid_argument("synth lemma keys must be non-empty and unique");
        }
        if (w.effect < 0.0) throw std::invalid_argument("synth effect sizes must be >= 0");
        if (w.profile == ChangeProfile::sense_gain && w.effect > 1.0) {
            throw std::invalid_argument("sense_gain weight must be <= 1");
        }
        if ((w.n1 && *w.n1 < 1) || (w.n2 && *w.n2 < 1)) throw std::invalid_argument("synth counts must be >= 1");
        for (std::size_t j = 0; j < i; ++j) {
            const auto& o = words[j];
            const bool same_profile = o.profile == w.profile && o.effect == w.effect;
            if (o.gold_score() == w.gold_score() && !same_profile) {
                throw std::invalid_argument("planted gold ties between different profiles: " + o.lemma_key +
                                            ", " + w.lemma_key);
            }
        }
    }
}

SynthBenchmark generate(const SynthSpec& spec) {
    spec.validate();
    SynthBenchmark out;
    const std::uint64_t total1 = spec.total1 ? spec.total1 : 20 * spec.n_max;
    const std::uint64_t total2 = spec.total2 ? spec.total2 : 20 * spec.n_max;
    out.manifest1 = {"synth-c1", "epoch-1", total1, spec.dim, {}};
    out.manifest2 = {"synth-c2", "epoch-2", total2, spec.dim, {}};

    for (const auto& w : spec.words) {
        auto rng = make_stream(spec.seed, w.lemma_key, 0, StreamPurpose::synth);
        const std::size_t d = spec.dim;

        GaussianSummary base;
        base.mean.resize(d);
        base.var.resize(d);
        std::normal_distribution<double> normal(0.0, spec.base_mean_scale);
        std::uniform_real_distribution<double> var_dist(0.5, 1.5);
        std::bernoulli_distribution coin(0.5);
        std::vector<double> sign(d);
        for (std::size_t j = 0; j < d; ++j) {
            base.mean[j] = normal(rng);
            base.var[j] = var_dist(rng);
            sign[j] = coin(rng) ? 1.0 : -1.0;
        }
        const std::size_t n1 = w.n1 ? *w.n1 : log_uniform_count(spec.n_min, spec.n_max, rng);
        const std::size_t n2 = w.n2 ? *w.n2 : log_uniform_count(spec.n_min, spec.n_max, rng);

        PlantedGenerators gen{base, base};
        switch (w.profile) {
            case ChangeProfile::stable: break;
            case ChangeProfile::mean_shift:
                for (std::size_t j = 0; j < d; ++j) gen.corpus2->mean[j] += w.effect * sign[j];
                break;
            case ChangeProfile::var_shift:
                for (std::size_t j = 0; j < d; ++j) gen.corpus2->var[j] *= 1.0 + w.effect;
                break;
            case ChangeProfile::sense_gain: gen.corpus2.reset(); break;
        }

        std::vector<float> rows1 = sample_rows(base, n1, rng);
        std::vector<float> rows2;
        if (gen.corpus2) {
            rows2 = sample_rows(*gen.corpus2, n2, rng);
        } else {
            GaussianSummary gained = base;
            for (std::size_t j = 0; j < d; ++j) gained.mean[j] += spec.sense_offset * sign[j];
            std::bernoulli_distribution pick_new(w.effect);
            rows2.reserve(n2 * d);
            for (std::size_t i = 0; i < n2; ++i) {
                const auto row = sample_rows(pick_new(rng) ? gained : base, 1, rng);
                rows2.insert(rows2.end(), row.begin(), row.end());
            }
        }

        out.manifest1.words.push_back({w.lemma_key, n1});
        out.manifest2.words.push_back({w.lemma_key, n2});
        out.words.push_back({w.lemma_key,
                             SiblingSet(w.lemma_key, out.manifest1.corpus_id, spec.dim, std::move(rows1),
                                        sentence_ids(out.manifest1.corpus_id, w.lemma_key, n1)),
                             SiblingSet(w.lemma_key, out.manifest2.corpus_id, spec.dim, std::move(rows2),
                                        sentence_ids(out.manifest2.corpus_id, w.lemma_key, n2))});
        out.generators.push_back(std::move(gen));
        out.gold.entries.push_back({w.lemma_key, w.gold_score(), w.profile != ChangeProfile::stable});
    }
    return out;
}

void write_benchmark(const SynthBenchmark& bench, const fs::path& dir) {
    std::vector<SiblingSet> c1, c2;
    std::string targets;
    for (const auto& w : bench.words) {
        c1.push_back(w.corpus1);
        c2.push_back(w.corpus2);
        targets += w.lemma_key + "\n";
    }
    write_corpus(dir / "corpus1", bench.manifest1, c1);
    write_corpus(dir / "corpus2", bench.manifest2, c2);
    write_gold(dir / "gold.tsv", bench.gold);
    write_text_file((dir / "targets.txt").string(), targets);
}

SynthSpec stable_benchmark_spec(std::uint64_t seed, std::size_t n_words) {
    SynthSpec spec;
    spec.seed = seed;
    for (std::size_t i = 0; i < n_words; ++i) spec.words.push_back(planted(word_key(i), ChangeProfile::stable, 0.0));
    return spec;
}

SynthSpec shifted_benchmark_spec(std::uint64_t seed, std::size_t n_words, double delta) {
    SynthSpec spec;
    spec.seed = seed;
    for (std::size_t i = 0; i < n_words; ++i) spec.words.push_back(planted(word_key(i), ChangeProfile::mean_shift, delta));
    return spec;
}

SynthSpec mixed_benchmark_spec(std::uint64_t seed, std::size_t n_stable, std::vector<double> deltas,
                               std::size_t per_delta) {
    SynthSpec spec;
    spec.seed = seed;
    std::size_t i = 0;
    for (; i < n_stable; ++i) spec.words.push_back(planted(word_key(i), ChangeProfile::stable, 0.0));
    for (double delta : deltas) {
        for (std::size_t k = 0; k < per_delta; ++k, ++i) {
            spec.words.push_back(planted(word_key(i), ChangeProfile::mean_shift, delta));
        }
    }
    return spec;
}

SynthSpec rate_minimum_spec(std::uint64_t seed, std::size_t n_words, std::size_t n_small, std::size_t n_large,
                            double delta) {
    SynthSpec spec;
    spec.seed = seed;
    spec.n_min = n_small;
    spec.n_max = n_large;
    for (std::size_t i = 0; i < n_words; ++i) {
        PlantedWord w = planted(word_key(i), ChangeProfile::mean_shift, delta);
        w.n1 = n_small;
        w.n2 = n_large;
        spec.words.push_back(std::move(w));
    }
    return spec;
}

double planted_rate_minimum(std::size_t n_small, std::size_t n_large) {
    return double(n_large) / double(n_small + n_large);
}

std::string synth_spec_to_json(const SynthSpec& spec) {
    json words = json::array();
    for (const auto& w : spec.words) {
        json jw = {{"lemma_key", w.lemma_key}, {"profile", profile_string(w.profile)}, {"effect", w.effect}};
        if (w.gold) jw["gold"] = *w.gold;
        if (w.n1) jw["n1"] = *w.n1;
        if (w.n2) jw["n2"] = *w.n2;
        words.push_back(std::move(jw));
    }
    json doc = {{"dim", spec.dim},       {"n_min", spec.n_min},
                {"n_max", spec.n_max},   {"seed", spec.seed},
                {"base_mean_scale", spec.base_mean_scale},
                {"sense_offset", spec.sense_offset},
                {"total1", spec.total1}, {"total2", spec.total2},
                {"words", words}};
    return doc.dump(2) + "\n";
}

SynthSpec synth_spec_from_json(std::string_view text) {
    SynthSpec spec;
    try {
        const json doc = json::parse(text);
        spec.dim = doc.value("dim", spec.dim);
        spec.n_min = doc.value("n_min", spec.n_min);
        spec.n_max = doc.value("n_max", spec.n_max);
        spec.seed = doc.value("seed", spec.seed);
        spec.base_mean_scale = doc.value("base_mean_scale", spec.base_mean_scale);
        spec.sense_offset = doc.value("sense_offset", spec.sense_offset);
        spec.total1 = doc.value("total1", spec.total1);
        spec.total2 = doc.value("total2", spec.total2);
        for (const auto& jw : doc.at("words")) {
            PlantedWord w;
            w.lemma_key = jw.at("lemma_key").get<std::string>();
            w.profile = parse_profile(jw.value("profile", std::string("stable")));
            w.effect = jw.value("effect", 0.0);
            if (jw.contains("gold")) w.gold = jw.at("gold").get<double>();
            if (jw.contains("n1")) w.n1 = jw.at("n1").get<std::size_t>();
            if (jw.contains("n2")) w.n2 = jw.at("n2").get<std::size_t>();
            spec.words.push_back(std::move(w));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid synth spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

}  // namespace sscd
