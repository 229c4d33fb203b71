#include "sscd/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "sscd/error.hpp"
#include "sscd/synth.hpp"
#include "sscd/text.hpp"

namespace sscd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& doc) { write_text_file(path.string(), doc.dump(2) + "\n"); }

json run_record(const std::string& command, const RunConfig& cfg) {
    return {{"tool", "sscd"}, {"version", kToolVersion}, {"command", command}, {"config", to_json(cfg)}};
}

json unscorable_json(const std::vector<UnscorableWord>& words) {
    json arr = json::array();
    for (const auto& u : words) arr.push_back({{"lemma_key", u.lemma_key}, {"reason", u.reason}});
    return arr;
}

SwapConfig swap_config_for(const RunConfig& cfg, const Corpus& c1, const Corpus& c2, double rate) {
    SwapConfig s;
    s.rate = rate;
    s.strategy = cfg.strategy;
    s.selection_metric = cfg.selection_metric;
    s.corpus_sizes = CorpusSizes{c1.manifest.total_sentences, c2.manifest.total_sentences};
    return s;
}

void require_out_dir(const RunConfig& cfg) {
    if (cfg.out_dir.empty()) throw std::invalid_argument("--out is required");
    fs::create_directories(cfg.out_dir);
}

std::vector<std::string> csv_fields(std::string_view line) {
    std::vector<std::string> out;
    for (auto f : split(line, ',')) out.emplace_back(f);
    return out;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

// ---- RunConfig -------------------------------------------------------------

std::vector<MetricSpec> RunConfig::metric_specs() const {
    std::vector<MetricSpec> specs;
    for (const auto& m : metrics) {
        MetricSpec spec;
        spec.name = parse_metric_name(m);
        spec.family = family.empty() ? default_family(spec.name) : parse_family(family);
        spec.dscd_samples = dscd_samples;
        spec.validate();
        specs.push_back(spec);
    }
    return specs;
}

void RunConfig::validate() const {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (!(swap_rate >= 0.0 && swap_rate <= 1.0)) throw std::invalid_argument("swap rate must be in [0, 1]");
    if (metrics.empty()) throw std::invalid_argument("at least one metric is required");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    metric_specs();
}

json to_json(const RunConfig& c) {
    return {{"corpus1", c.corpus1},
            {"corpus2", c.corpus2},
            {"targets", c.targets},
            {"gold", c.gold},
            {"gold_format", c.gold_format == GoldFormat::liverpool ? "liverpool" : "semeval"},
            {"metrics", c.metrics},
            {"family", c.family},
            {"dscd_samples", c.dscd_samples},
            {"swap_rate", c.swap_rate},
            {"strategy", strategy_string(c.strategy)},
            {"selection_metric", distance_string(c.selection_metric)},
            {"repetitions", c.repetitions},
            {"grid", c.grid},
            {"seed", c.seed},
            {"out", c.out_dir},
            {"aggregation", aggregation_string(c.aggregation)},
            {"strict", c.strict},
            {"threads", c.threads},
            {"bootstrap", c.bootstrap},
            {"ci_level", c.ci_level},
            {"ci_resamples", c.ci_resamples},
            {"tie_sigma", c.tie_sigma},
            {"scores", c.scores},
            {"per_rep", c.per_rep}};
}

RunConfig config_from_json(const json& doc, RunConfig c) {
    const json& j = doc.contains("config") && doc.at("config").is_object() ? doc.at("config") : doc;
    try {
        auto str = [&](const char* key, std::string& dst) {
            if (j.contains(key)) dst = j.at(key).get<std::string>();
        };
        str("corpus1", c.corpus1);
        str("corpus2", c.corpus2);
        str("targets", c.targets);
        str("gold", c.gold);
        str("family", c.family);
        str("out", c.out_dir);
        str("scores", c.scores);
        str("per_rep", c.per_rep);
        if (j.contains("gold_format")) c.gold_format = parse_gold_format(j.at("gold_format").get<std::string>());
        if (j.contains("metrics")) {
            const auto& m = j.at("metrics");
            c.metrics = m.is_string() ? std::vector<std::string>{m.get<std::string>()} : m.get<std::vector<std::string>>();
        }
        c.dscd_samples = j.value("dscd_samples", c.dscd_samples);
        c.swap_rate = j.value("swap_rate", c.swap_rate);
        if (j.contains("strategy")) c.strategy = parse_strategy(j.at("strategy").get<std::string>());
        if (j.contains("selection_metric")) {
            c.selection_metric = parse_distance(j.at("selection_metric").get<std::string>());
        }
        c.repetitions = j.value("repetitions", c.repetitions);
        if (j.contains("grid")) c.grid = j.at("grid").get<std::vector<double>>();
        c.seed = j.value("seed", c.seed);
        if (j.contains("aggregation")) c.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
        c.strict = j.value("strict", c.strict);
        c.threads = j.value("threads", c.threads);
        c.bootstrap = j.value("bootstrap", c.bootstrap);
        c.ci_level = j.value("ci_level", c.ci_level);
        c.ci_resamples = j.value("ci_resamples", c.ci_resamples);
        c.tie_sigma = j.value("tie_sigma", c.tie_sigma);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("invalid config: ") + e.what());
    }
    return c;
}

// ---- data loading & CSV ----------------------------------------------------

std::vector<WordPair> load_word_pairs(const Corpus& c1, const Corpus& c2, const std::string& targets_file) {
    std::vector<std::string> lemmas;
    if (!targets_file.empty()) {
        for (auto& t : load_targets(targets_file)) lemmas.push_back(std::move(t.lemma_key));
    } else {
        for (const auto& w : c1.manifest.words) {
            if (c2.manifest.occurrence_count(w.lemma_key)) lemmas.push_back(w.lemma_key);
        }
    }
    auto load = [](const Corpus& c, const std::string& lemma) {
        if (!c.manifest.occurrence_count(lemma)) {
            return SiblingSet(lemma, c.manifest.corpus_id, c.manifest.embedding_dim, {}, {});
        }
        return load_corpus_word(c, lemma);
    };
    std::vector<WordPair> pairs;
    pairs.reserve(lemmas.size());
    for (const auto& lemma : lemmas) pairs.push_back({lemma, load(c1, lemma), load(c2, lemma)});
    return pairs;
}

std::string render_scores_csv(const BatchScores& batch) {
    std::string out = "lemma,score,e_original,ci_low,ci_high\n";
    for (const auto& s : batch.scores) {
        out += s.lemma_key + "," + format_real(s.point_score) + "," + format_real(s.e_original) + "," +
               (s.ci_low ? format_real(*s.ci_low) : "") + "," + (s.ci_high ? format_real(*s.ci_high) : "") + "\n";
    }
    return out;
}

std::string render_per_rep_csv(const BatchScores& batch) {
    std::string out = "lemma,rep,e_swap,score\n";
    for (const auto& s : batch.scores) {
        for (std::size_t k = 0; k < s.per_rep.size(); ++k) {
            out += s.lemma_key + "," + std::to_string(k) + "," + format_real(s.per_rep[k].e_swap) + "," +
                   format_real(s.per_rep[k].score) + "\n";
        }
    }
    return out;
}

std::vector<ChangeScore> read_scores(const std::string& scores_csv, const std::string& per_rep_csv) {
    const auto lines = csv_lines(read_text_file(scores_csv));
    if (lines.empty() || lines.front().rfind("lemma,score,e_original", 0) != 0) {
        throw DataError(scores_csv + ": missing 'lemma,score,e_original,ci_low,ci_high' header");
    }
    std::vector<ChangeScore> scores;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = csv_fields(lines[i]);
        if (f.size() != 5) throw DataError(scores_csv + ": line " + std::to_string(i + 1) + " needs 5 fields");
        ChangeScore s;
        s.lemma_key = f[0];
        s.point_score = parse_double(f[1]);
        s.e_original = parse_double(f[2]);
        if (!f[3].empty()) s.ci_low = parse_double(f[3]);
        if (!f[4].empty()) s.ci_high = parse_double(f[4]);
        if (!index.emplace(s.lemma_key, scores.size()).second) {
            throw DataError(scores_csv + ": duplicate lemma '" + s.lemma_key + "'");
        }
        scores.push_back(std::move(s));
    }
    if (per_rep_csv.empty()) return scores;

    const auto rep_lines = csv_lines(read_text_file(per_rep_csv));
    if (rep_lines.empty() || rep_lines.front() != "lemma,rep,e_swap,score") {
        throw DataError(per_rep_csv + ": missing 'lemma,rep,e_swap,score' header");
    }
    for (std::size_t i = 1; i < rep_lines.size(); ++i) {
        const auto f = csv_fields(rep_lines[i]);
        if (f.size() != 4) throw DataError(per_rep_csv + ": line " + std::to_string(i + 1) + " needs 4 fields");
        auto it = index.find(f[0]);
        if (it == index.end()) throw DataError(per_rep_csv + ": lemma '" + f[0] + "' not in scores file");
        auto& s = scores[it->second];
        const auto k = static_cast<std::size_t>(parse_double(f[1]));
        if (k != s.per_rep.size()) throw DataError(per_rep_csv + ": repetitions out of order for '" + f[0] + "'");
        s.per_rep.push_back({parse_double(f[2]), parse_double(f[3])});
    }
    // A non-empty per-repetition file means contexts were swapped.
    for (auto& s : scores) s.swap_rate = std::numeric_limits<double>::quiet_NaN();
    return scores;
}

// ---- commands --------------------------------------------------------------

int cmd_score(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    cfg.validate();
    const auto specs = cfg.metric_specs();
    if (specs.size() != 1) throw std::invalid_argument("score takes exactly one metric");
    require_out_dir(cfg);

    const Corpus c1 = open_corpus(cfg.corpus1);
    const Corpus c2 = open_corpus(cfg.corpus2);
    const auto words = load_word_pairs(c1, c2, cfg.targets);
    const SwapConfig swap = swap_config_for(cfg, c1, c2, cfg.swap_rate);

    BatchOptions options;
    options.threads = cfg.threads;
    if (cfg.bootstrap && cfg.repetitions >= 2) options.bootstrap = BootstrapOptions{cfg.ci_level, cfg.ci_resamples};
    const BatchScores batch = score_all(words, specs.front(), swap, cfg.repetitions, cfg.seed, options);

    const fs::path dir(cfg.out_dir);
    write_text_file((dir / "scores.csv").string(), render_scores_csv(batch));
    if (cfg.swap_rate > 0.0) write_text_file((dir / "per_rep.csv").string(), render_per_rep_csv(batch));

    json record = run_record("score", cfg);
    record["metric"] = specs.front().label();
    record["n_words"] = words.size();
    record["n_scored"] = batch.scores.size();
    record["unscorable"] = unscorable_json(batch.unscorable);
    write_json(dir / "run.json", record);

    out << "scored " << batch.scores.size() << " of " << words.size() << " words with " << specs.front().label()
        << " at swap rate " << format_rate(cfg.swap_rate) << " -> " << (dir / "scores.csv").string() << "\n";
    for (const auto& u : batch.unscorable) err << "warning: unscorable '" << u.lemma_key << "': " << u.reason << "\n";
    if (cfg.strict && !batch.unscorable.empty()) return kExitStrictUnscorable;
    return kExitOk;
}

int cmd_rate_search(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    cfg.validate();
    require_out_dir(cfg);
    const Corpus c1 = open_corpus(cfg.corpus1);
    const Corpus c2 = open_corpus(cfg.corpus2);
    const auto words = load_word_pairs(c1, c2, cfg.targets);
    const SwapConfig swap = swap_config_for(cfg, c1, c2, 0.0);

    std::vector<RateCurve> curves;
    json results = json::array();
    bool any_excluded = false;
    for (const auto& spec : cfg.metric_specs()) {
        RateSearchOptions opts{cfg.threads, cfg.tie_sigma};
        RateSearchResult r = estimate_swap_rate(words, spec, swap, cfg.grid, cfg.repetitions, cfg.seed, opts);
        out << spec.label() << ": estimated swap rate " << format_rate(r.estimated_rate) << " (" << r.n_words
            << " words)\n";
        for (const auto& u : r.excluded) err << "warning: excluded '" << u.lemma_key << "': " << u.reason << "\n";
        any_excluded = any_excluded || !r.excluded.empty();
        results.push_back({{"metric", spec.label()},
                           {"grid", r.grid},
                           {"mean_e_swap", r.mean_e_swap},
                           {"std_e_swap", r.std_e_swap},
                           {"estimated_rate", r.estimated_rate},
                           {"n_words", r.n_words},
                           {"excluded", unscorable_json(r.excluded)}});
        curves.push_back({spec.label(), std::move(r)});
    }
    const fs::path dir(cfg.out_dir);
    write_text_file((dir / "rate_curve.csv").string(), render_rate_curves(curves));
    json record = run_record("rate-search", cfg);
    record["results"] = results;
    write_json(dir / "rate_search.json", record);
    if (cfg.strict && any_excluded) return kExitStrictUnscorable;
    return kExitOk;
}

namespace {

json report_json(const EvalReport& r) {
    json j = {{"mode", aggregation_string(r.mode)},
              {"spearman", r.spearman},
              {"n_words", r.n_words},
              {"excluded", r.excluded}};
    if (r.per_seed_spearman) j["per_seed_spearman"] = *r.per_seed_spearman;
    if (r.mean_seed_spearman) j["mean_seed_spearman"] = *r.mean_seed_spearman;
    return j;
}

int eval_scores_file(const RunConfig& cfg, const GoldRanking& gold, std::ostream& out, std::ostream& err) {
    std::string per_rep = cfg.per_rep;
    if (per_rep.empty()) {
        const fs::path guess = fs::path(cfg.scores).parent_path() / "per_rep.csv";
        if (fs::exists(guess)) per_rep = guess.string();
    }
    AggregationMode mode = cfg.aggregation;
    if (mode == AggregationMode::per_seed_mean && per_rep.empty()) {
        err << "warning: no per-repetition scores; evaluating pooled point scores\n";
        mode = AggregationMode::pooled;
    }
    const auto scores = read_scores(cfg.scores, per_rep);
    const EvalReport report = evaluate_run(scores, gold, mode);

    json record = run_record("eval", cfg);
    record["report"] = report_json(report);
    write_json(fs::path(cfg.out_dir) / "eval.json", record);

    out << "spearman " << format_fixed(report.spearman) << " (" << aggregation_string(report.mode) << ", "
        << report.n_words << " words)\n";
    for (const auto& e : report.excluded) err << "warning: gold word '" << e << "' has no score\n";
    if (cfg.strict && !report.excluded.empty()) return kExitStrictUnscorable;
    return kExitOk;
}

int eval_sweep(const RunConfig& cfg, const GoldRanking& gold, std::ostream& out, std::ostream& err) {
    const Corpus c1 = open_corpus(cfg.corpus1);
    const Corpus c2 = open_corpus(cfg.corpus2);
    const auto words = load_word_pairs(c1, c2, cfg.targets);

    std::vector<SweepCell> cells;
    std::vector<RateCurve> curves;
    json reports = json::array();
    std::vector<std::string> unscored;
    for (const auto& spec : cfg.metric_specs()) {
        for (double rate : cfg.grid) {
            const SwapConfig swap = swap_config_for(cfg, c1, c2, rate);
            const BatchScores batch = score_all(words, spec, swap, cfg.repetitions, cfg.seed, {cfg.threads, {}});
            const EvalReport report = evaluate_run(batch.scores, gold, cfg.aggregation);
            cells.push_back({spec.label(), rate, report.spearman});
            json r = report_json(report);
            r["metric"] = spec.label();
            r["rate"] = rate;
            reports.push_back(std::move(r));
            for (const auto& e : report.excluded) {
                if (std::find(unscored.begin(), unscored.end(), e) == unscored.end()) unscored.push_back(e);
            }
        }
        std::vector<double> grid;
        for (double r : cfg.grid) {
            if (r > 0.0) grid.push_back(r);
        }
        if (!grid.empty()) {
            RateSearchOptions opts{cfg.threads, cfg.tie_sigma};
            curves.push_back({spec.label(),
                              estimate_swap_rate(words, spec, swap_config_for(cfg, c1, c2, 0.0), grid, cfg.repetitions,
                                                 cfg.seed, opts)});
        }
    }
    render_tables(cells, curves, cfg.out_dir);
    json record = run_record("eval", cfg);
    record["reports"] = reports;
    write_json(fs::path(cfg.out_dir) / "eval_sweep.json", record);

    out << render_spearman_table(cells);
    for (const auto& e : unscored) err << "warning: gold word '" << e << "' has no score\n";
    if (cfg.strict && !unscored.empty()) return kExitStrictUnscorable;
    return kExitOk;
}

}  // namespace

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.gold.empty()) throw std::invalid_argument("--gold is required");
    require_out_dir(cfg);
    const GoldRanking gold = load_gold(cfg.gold, cfg.gold_format);
    if (!cfg.scores.empty()) return eval_scores_file(cfg, gold, out, err);
    if (cfg.corpus1.empty() || cfg.corpus2.empty()) {
        throw std::invalid_argument("eval needs --scores, or --corpus1 and --corpus2 for a sweep");
    }
    cfg.validate();
    return eval_sweep(cfg, gold, out, err);
}

int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream&) {
    if (o.out_dir.empty()) throw std::invalid_argument("--out is required");
    SynthSpec spec;
    if (!o.spec_file.empty()) {
        spec = synth_spec_from_json(read_text_file(o.spec_file));
    } else if (o.preset == "mixed") {
        spec = mixed_benchmark_spec(o.seed);
    } else if (o.preset == "stable") {
        spec = stable_benchmark_spec(o.seed, o.words);
    } else if (o.preset == "shifted") {
        spec = shifted_benchmark_spec(o.seed, o.words, o.delta);
    } else if (o.preset == "rate-minimum") {
        spec = rate_minimum_spec(o.seed, o.words);
    } else {
        throw std::invalid_argument("unknown synth preset '" + o.preset + "'");
    }
    if (o.spec_file.empty()) {
        spec.dim = o.dim;
        if (o.preset != "rate-minimum") {
            spec.n_min = o.n_min;
            spec.n_max = o.n_max;
        }
    }
    const SynthBenchmark bench = generate(spec);
    write_benchmark(bench, o.out_dir);
    write_text_file((fs::path(o.out_dir) / "synth_spec.json").string(), synth_spec_to_json(spec));
    out << "wrote " << bench.words.size() << " words (dim " << spec.dim << ") to " << o.out_dir << "\n";
    return kExitOk;
}

int cmd_inspect(const fs::path& path, std::size_t rows, std::ostream& out, std::ostream& err) {
    fs::path target = path;
    if (fs::is_directory(target)) target /= "manifest.json";
    if (!fs::exists(target)) {
        err << "error: no such file: " << target.string() << "\n";
        return kExitDataError;
    }
    if (target.extension() == ".json") {
        const CorpusManifest m = load_manifest(target);
        out << "manifest " << target.string() << "\n"
            << "  corpus_id:       " << m.corpus_id << "\n"
            << "  epoch_label:     " << m.epoch_label << "\n"
            << "  total_sentences: " << m.total_sentences << "\n"
            << "  embedding_dim:   " << m.embedding_dim << "\n"
            << "  words:           " << m.words.size() << "\n";
        for (const auto& w : m.words) out << "    " << w.lemma_key << "\t" << w.occurrence_count << "\n";
        return kExitOk;
    }

    std::ifstream in(target, std::ios::binary);
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto bytes = std::as_bytes(std::span(raw.data(), raw.size()));
    try {
        const SiblingHeader h = decode_sibling_header(bytes);
        out << "sibling file " << target.string() << "\n"
            << "  version: " << h.version << "\n"
            << "  N:       " << h.rows << "\n"
            << "  d:       " << h.dim << "\n"
            << "  bytes:   " << raw.size() << "\n";
        const SiblingSet set = decode_sibling_set(bytes, target.stem().string());
        if (set.empty()) {
            out << "  empty: no occurrences\n";
            return kExitOk;
        }
        const std::size_t k = std::min(rows, set.size());
        for (std::size_t i = 0; i < k; ++i) {
            double sq = 0.0;
            for (float v : set.row(i)) sq += double(v) * double(v);
            out << "  row " << i << " [" << set.sentence_ids()[i] << "] norm " << format_fixed(std::sqrt(sq)) << "\n";
        }
        if (k < set.size()) out << "  ... " << (set.size() - k) << " more rows\n";
    } catch (const FormatError& e) {
        err << "error: " << target.string() << ": byte offset " << e.offset() << ": " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitOk;
}

// ---- argument parsing ------------------------------------------------------

namespace {

/// Options shared by score / rate-search / eval. Values land in `raw`;
/// only options actually given on the command line override the config.
struct ConfigOptions {
    std::map<std::string, std::string> raw;
    std::vector<std::pair<CLI::Option*, std::string>> options;
    bool strict = false;
    bool no_ci = false;
    CLI::Option* strict_opt = nullptr;
    CLI::Option* no_ci_opt = nullptr;
    std::string config_file;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        options.emplace_back(app->add_option(flag, raw[key], help), key);
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_file.empty()) {
            try {
                cfg = config_from_json(json::parse(read_text_file(config_file)));
            } catch (const json::exception& e) {
                throw std::invalid_argument(config_file + ": " + e.what());
            }
        }
        json overrides = json::object();
        for (const auto& [opt, key] : options) {
            if (opt->count() == 0) continue;
            const std::string& v = raw.at(key);
            if (key == "metrics") {
                std::vector<std::string> names;
                for (auto part : split(v, ',')) {
                    if (!part.empty()) names.emplace_back(part);
                }
                overrides[key] = names;
            } else if (key == "grid") {
                overrides[key] = parse_rate_list(v);
            } else if (key == "swap_rate" || key == "ci_level" || key == "tie_sigma") {
                overrides[key] = parse_double(v);
            } else if (key == "repetitions" || key == "threads" || key == "dscd_samples" || key == "ci_resamples" ||
                       key == "seed") {
                overrides[key] = static_cast<std::uint64_t>(std::stoull(v));
            } else {
                overrides[key] = v;
            }
        }
        if (strict_opt && strict_opt->count()) overrides["strict"] = true;
        if (no_ci_opt && no_ci_opt->count()) overrides["bootstrap"] = false;
        return config_from_json(overrides, cfg);
    }
};

void add_config_options(CLI::App* app, ConfigOptions& o, bool with_rate, bool with_grid) {
    app->add_option("--config", o.config_file, "JSON config or run record; flags override it");
    o.add(app, "--corpus1", "corpus1", "Corpus 1 directory (manifest.json + sibling files)");
    o.add(app, "--corpus2", "corpus2", "Corpus 2 directory");
    o.add(app, "--targets", "targets", "Target list, one lemma per line (default: words in both manifests)");
    o.add(app, "--metric", "metrics",
          "kl12, kl21, jeffreys, braycurtis, canberra, chebyshev, cityblock, correlation, cosine, euclidean"
          " (comma-separated list where allowed)");
    o.add(app, "--family", "family", "div, mean or dscd (default: div for divergences, mean otherwise)");
    o.add(app, "--dscd-samples", "dscd_samples", "Samples per side for the dscd family");
    if (with_rate) o.add(app, "--swap-rate", "swap_rate", "Swap rate r in [0, 1]; 0 disables swapping");
    o.add(app, "--strategy", "strategy", "random, centroid, random-normalized or centroid-normalized");
    o.add(app, "--selection-metric", "selection_metric", "Distance used by centroid strategies");
    o.add(app, "--repetitions", "repetitions", "Swap repetitions per word");
    if (with_grid) o.add(app, "--grid", "grid", "Comma-separated swap rates");
    o.add(app, "--seed", "seed", "Base seed");
    o.add(app, "--threads", "threads", "Worker threads");
    o.add(app, "--out", "out", "Output directory");
    o.strict_opt = app->add_flag("--strict", o.strict, "Exit with status 3 when any word is unscorable");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Swapping-based semantic change detection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    ConfigOptions score_o, rate_o, eval_o;

    auto* score = app.add_subcommand("score", "Score semantic change of target words");
    add_config_options(score, score_o, true, false);
    score_o.add(score, "--ci-level", "ci_level", "Bootstrap confidence level");
    score_o.add(score, "--ci-resamples", "ci_resamples", "Bootstrap resamples");
    score_o.no_ci_opt = score->add_flag("--no-ci", score_o.no_ci, "Skip bootstrap confidence intervals");

    auto* rate = app.add_subcommand("rate-search", "Estimate the swap rate minimising mean e_swap");
    add_config_options(rate, rate_o, false, true);
    rate_o.add(rate, "--tie-sigma", "tie_sigma", "Treat rates within this many standard errors of the minimum as tied");

    auto* eval = app.add_subcommand("eval", "Spearman evaluation against gold");
    add_config_options(eval, eval_o, false, true);
    eval_o.add(eval, "--gold", "gold", "Gold file (word<TAB>score)");
    eval_o.add(eval, "--gold-format", "gold_format", "semeval or liverpool");
    eval_o.add(eval, "--scores", "scores", "scores.csv from `score`");
    eval_o.add(eval, "--per-rep", "per_rep", "per_rep.csv from `score` (default: next to --scores)");
    eval_o.add(eval, "--mode", "aggregation", "per-seed (default) or pooled");

    SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic benchmark with planted gold");
    synth->add_option("--preset", synth_opts.preset, "mixed, stable, shifted or rate-minimum");
    synth->add_option("--spec", synth_opts.spec_file, "JSON synth spec (overrides --preset)");
    synth->add_option("--seed", synth_opts.seed, "Seed");
    synth->add_option("--dim", synth_opts.dim, "Embedding dimension");
    synth->add_option("--n-min", synth_opts.n_min, "Minimum occurrences per corpus");
    synth->add_option("--n-max", synth_opts.n_max, "Maximum occurrences per corpus");
    synth->add_option("--words", synth_opts.words, "Word count (stable, shifted, rate-minimum)");
    synth->add_option("--delta", synth_opts.delta, "Mean shift (shifted)");
    synth->add_option("--out", synth_opts.out_dir, "Output directory")->required();

    std::string inspect_path;
    std::size_t inspect_rows = 5;
    auto* inspect = app.add_subcommand("inspect", "Summarise a manifest or sibling file");
    inspect->add_option("path", inspect_path, "Sibling file, manifest.json or corpus directory")->required();
    inspect->add_option("--rows", inspect_rows, "Rows to show");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*score) return cmd_score(score_o.resolve(), out, err);
        if (*rate) return cmd_rate_search(rate_o.resolve(), out, err);
        if (*eval) return cmd_eval(eval_o.resolve(), out, err);
        if (*synth) return cmd_synth(synth_opts, out, err);
        if (*inspect) return cmd_inspect(inspect_path, inspect_rows, out, err);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError& e) {
        err << "error: byte offset " << e.offset() << ": " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(int(argv.size()), argv.data(), out, err);
}

}  // namespace sscd::cli
