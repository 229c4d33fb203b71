#include "sscd/corpus.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "sscd/error.hpp"

namespace sscd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'S', 'C', 'D'};
constexpr std::size_t kHeaderBytes = 16;

class ByteReader {
public:
    explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    std::uint64_t offset() const noexcept { return pos_; }

    void require(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) {
            throw FormatError("truncated sibling file: expected " + std::to_string(n) +
                                  " bytes for " + what + " at offset " + std::to_string(pos_) +
                                  ", " + std::to_string(bytes_.size() - pos_) + " available",
                              pos_);
        }
    }

    std::uint32_t u32(const char* what) {
        require(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= std::uint32_t(std::to_integer<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }

    std::string text(std::size_t n, const char* what) {
        require(n, what);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }

    bool at_end() const noexcept { return pos_ == bytes_.size(); }

private:
    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xffu));
}

std::vector<std::byte> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::byte> bytes(raw.size());
    std::transform(raw.begin(), raw.end(), bytes.begin(), [](char c) { return std::byte(c); });
    return bytes;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_bytes(const fs::path& path, std::span<const std::byte> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

std::vector<std::string_view> split_fields(std::string_view line, bool any_separator) {
    std::vector<std::string_view> fields;
    auto is_sep = [&](char c) {
        return c == '\t' || (any_separator && (c == ',' || c == ' '));
    };
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || is_sep(line[i])) {
            if (!(any_separator && i == start)) fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

// ---- CorpusManifest --------------------------------------------------------

void CorpusManifest::validate() const {
    if (embedding_dim == 0) throw DataError("manifest " + corpus_id + ": embedding_dim must be > 0");
    std::unordered_set<std::string_view> seen;
    for (const auto& w : words) {
        if (w.lemma_key.empty()) throw DataError("manifest " + corpus_id + ": empty lemma_key");
        if (!seen.insert(w.lemma_key).second) {
            throw DataError("manifest " + corpus_id + ": duplicate lemma_key '" + w.lemma_key + "'");
        }
        if (w.occurrence_count > total_sentences) {
            throw DataError("manifest " + corpus_id + ": occurrence_count of '" + w.lemma_key +
                            "' exceeds total_sentences");
        }
    }
}

std::optional<std::uint64_t> CorpusManifest::occurrence_count(std::string_view lemma_key) const {
    for (const auto& w : words) {
        if (w.lemma_key == lemma_key) return w.occurrence_count;
    }
    return std::nullopt;
}

std::string manifest_to_json(const CorpusManifest& m) {
    json words = json::array();
    for (const auto& w : m.words) {
        words.push_back({{"lemma_key", w.lemma_key}, {"occurrence_count", w.occurrence_count}});
    }
    json doc = {{"corpus_id", m.corpus_id},
                {"epoch_label", m.epoch_label},
                {"total_sentences", m.total_sentences},
                {"embedding_dim", m.embedding_dim},
                {"words", words}};
    return doc.dump(2) + "\n";
}

CorpusManifest manifest_from_json(std::string_view text) {
    CorpusManifest m;
    try {
        const json doc = json::parse(text);
        m.corpus_id = doc.at("corpus_id").get<std::string>();
        m.epoch_label = doc.value("epoch_label", std::string{});
        m.total_sentences = doc.at("total_sentences").get<std::uint64_t>();
        m.embedding_dim = doc.at("embedding_dim").get<std::uint32_t>();
        for (const auto& w : doc.at("words")) {
            m.words.push_back({w.at("lemma_key").get<std::string>(),
                               w.at("occurrence_count").get<std::uint64_t>()});
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid manifest: ") + e.what());
    }
    m.validate();
    return m;
}

CorpusManifest load_manifest(const fs::path& path) {
    try {
        return manifest_from_json(read_text(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_manifest(const fs::path& path, const CorpusManifest& manifest) {
    const std::string text = manifest_to_json(manifest);
    write_bytes(path, std::as_bytes(std::span(text.data(), text.size())));
}

// ---- SiblingSet ------------------------------------------------------------

SiblingSet::SiblingSet(std::string lemma_key, std::string corpus_id, std::uint32_t dim,
                       std::vector<float> values, std::vector<std::string> sentence_ids)
    : lemma_key_(std::move(lemma_key)),
      corpus_id_(std::move(corpus_id)),
      dim_(dim),
      values_(std::move(values)),
      sentence_ids_(std::move(sentence_ids)) {
    if (dim_ == 0) throw DataError("sibling set dimension must be > 0");
    if (values_.size() != sentence_ids_.size() * dim_) {
        throw DimensionMismatch("sibling set '" + lemma_key_ + "': " + std::to_string(values_.size()) +
                                " values for " + std::to_string(sentence_ids_.size()) + " rows of dim " +
                                std::to_string(dim_));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("sibling set '" + lemma_key_ + "': non-finite value in row " +
                            std::to_string(i / dim_));
        }
    }
}

SiblingSet SiblingSet::select(std::span<const std::size_t> rows) const {
    SiblingSet out;
    out.lemma_key_ = lemma_key_;
    out.corpus_id_ = corpus_id_;
    out.dim_ = dim_;
    out.values_.reserve(rows.size() * dim_);
    out.sentence_ids_.reserve(rows.size());
    for (std::size_t r : rows) {
        auto v = row(r);
        out.values_.insert(out.values_.end(), v.begin(), v.end());
        out.sentence_ids_.push_back(sentence_ids_[r]);
    }
    return out;
}

// ---- Binary format ---------------------------------------------------------

SiblingHeader decode_sibling_header(std::span<const std::byte> bytes) {
    ByteReader in(bytes);
    const std::string magic = in.text(4, "magic");
    if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) {
        throw FormatError("bad magic: not a sibling file", 0);
    }
    SiblingHeader h;
    h.version = in.u32("version");
    if (h.version != kSiblingFormatVersion) {
        throw FormatError("unsupported sibling file version " + std::to_string(h.version), 4);
    }
    h.rows = in.u32("row count");
    h.dim = in.u32("dimension");
    if (h.dim == 0) throw FormatError("dimension must be > 0", 12);
    return h;
}

SiblingSet decode_sibling_set(std::span<const std::byte> bytes, std::string lemma_key,
                              std::string corpus_id) {
    const SiblingHeader h = decode_sibling_header(bytes);
    ByteReader in(bytes);
    in.text(kHeaderBytes, "header");

    const std::uint64_t n_values = std::uint64_t(h.rows) * h.dim;
    if ((bytes.size() - kHeaderBytes) / 4 < n_values) {
        // Locate the first incomplete row for the message.
        const std::uint64_t full_rows = (bytes.size() - kHeaderBytes) / 4 / h.dim;
        throw FormatError("truncated sibling file: header declares " + std::to_string(h.rows) + "x" +
                              std::to_string(h.dim) + " values, data ends in row " +
                              std::to_string(full_rows),
                          kHeaderBytes + full_rows * h.dim * 4, full_rows);
    }
    std::vector<float> values(n_values);
    for (std::uint64_t i = 0; i < n_values; ++i) {
        const std::uint64_t at = in.offset();
        values[i] = in.f32("vector data");
        if (!std::isfinite(values[i])) {
            throw FormatError("non-finite value in row " + std::to_string(i / h.dim) + ", column " +
                                  std::to_string(i % h.dim),
                              at, i / h.dim);
        }
    }
    std::vector<std::string> ids;
    ids.reserve(h.rows);
    for (std::uint32_t r = 0; r < h.rows; ++r) {
        const std::uint32_t len = in.u32("sentence id length");
        ids.push_back(in.text(len, "sentence id"));
    }
    if (!in.at_end()) {
        throw FormatError("trailing bytes after sentence ids", in.offset());
    }
    return SiblingSet(std::move(lemma_key), std::move(corpus_id), h.dim, std::move(values), std::move(ids));
}

std::vector<std::byte> encode_sibling_set(const SiblingSet& set) {
    std::vector<std::byte> out;
    out.reserve(kHeaderBytes + set.values().size() * 4);
    for (char c : kMagic) out.push_back(std::byte(c));
    put_u32(out, kSiblingFormatVersion);
    put_u32(out, std::uint32_t(set.size()));
    put_u32(out, set.dim());
    for (float v : set.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    for (const auto& id : set.sentence_ids()) {
        put_u32(out, std::uint32_t(id.size()));
        for (char c : id) out.push_back(std::byte(c));
    }
    return out;
}

SiblingSet load_sibling_set(const fs::path& path, std::string lemma_key, std::string corpus_id) {
    const auto bytes = read_file(path);
    try {
        return decode_sibling_set(bytes, std::move(lemma_key), std::move(corpus_id));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what(), e.offset(), e.row());
    }
}

void write_sibling_set(const fs::path& path, const SiblingSet& set) {
    write_bytes(path, encode_sibling_set(set));
}

// ---- Corpus directories ----------------------------------------------------

std::string sibling_file_name(std::string_view lemma_key) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (std::size_t i = 0; i < lemma_key.size(); ++i) {
        const auto c = static_cast<unsigned char>(lemma_key[i]);
        if (c == '/' || c == '\\' || c == '%' || c < 0x20 || c == 0x7f || (i == 0 && c == '.')) {
            out += '%';
            out += kHex[c >> 4];
            out += kHex[c & 0xf];
        } else {
            out += char(c);
        }
    }
    return out + ".sscd";
}

Corpus open_corpus(const fs::path& dir) {
    return Corpus{dir, load_manifest(dir / "manifest.json")};
}

void check_manifest_consistency(const CorpusManifest& manifest, const SiblingSet& set) {
    const auto expected = manifest.occurrence_count(set.lemma_key());
    if (!expected) {
        throw DataError("corpus " + manifest.corpus_id + ": '" + set.lemma_key() + "' not in manifest");
    }
    if (set.dim() != manifest.embedding_dim) {
        throw DimensionMismatch("corpus " + manifest.corpus_id + ": '" + set.lemma_key() + "' has dim " +
                                std::to_string(set.dim()) + ", manifest says " +
                                std::to_string(manifest.embedding_dim));
    }
    if (set.size() != *expected) {
        throw DataError("corpus " + manifest.corpus_id + ": '" + set.lemma_key() + "' has " +
                        std::to_string(set.size()) + " rows, manifest says " + std::to_string(*expected));
    }
}

SiblingSet load_corpus_word(const Corpus& corpus, std::string_view lemma_key) {
    const auto count = corpus.manifest.occurrence_count(lemma_key);
    if (!count) {
        throw DataError("corpus " + corpus.manifest.corpus_id + ": '" + std::string(lemma_key) +
                        "' not in manifest");
    }
    const fs::path path = corpus.dir / sibling_file_name(lemma_key);
    if (*count == 0 && !fs::exists(path)) {
        return SiblingSet(std::string(lemma_key), corpus.manifest.corpus_id, corpus.manifest.embedding_dim,
                          {}, {});
    }
    auto set = load_sibling_set(path, std::string(lemma_key), corpus.manifest.corpus_id);
    check_manifest_consistency(corpus.manifest, set);
    return set;
}

void write_corpus(const fs::path& dir, const CorpusManifest& manifest, std::span<const SiblingSet> sets) {
    manifest.validate();
    fs::create_directories(dir);
    for (const auto& s : sets) {
        check_manifest_consistency(manifest, s);
        write_sibling_set(dir / sibling_file_name(s.lemma_key()), s);
    }
    write_manifest(dir / "manifest.json", manifest);
}

// ---- Gold & targets --------------------------------------------------------

GoldFormat parse_gold_format(std::string_view name) {
    if (name == "semeval" || name == "semeval_graded") return GoldFormat::semeval_graded;
    if (name == "liverpool") return GoldFormat::liverpool;
    throw DataError("unknown gold format '" + std::string(name) + "'");
}

const GoldEntry* GoldRanking::find(std::string_view lemma_key) const {
    for (const auto& e : entries) {
        if (e.lemma_key == lemma_key) return &e;
    }
    return nullptr;
}

GoldRanking parse_gold(std::string_view text, GoldFormat format) {
    // SemEval graded truth is strictly `word<TAB>score`. The Liverpool list
    // additionally tolerates comma/space separators and a header line.
    const bool lenient = format == GoldFormat::liverpool;
    GoldRanking gold;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool header_allowed = lenient;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || trim(line).front() == '#') continue;

        const auto fields = split_fields(line, lenient);
        const std::string where = "gold line " + std::to_string(line_no);
        if (fields.size() < 2 || fields.size() > 3) {
            throw DataError(where + ": expected word<TAB>score");
        }
        const auto score = parse_real(fields[1]);
        if (!score) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            throw DataError(where + ": unparsable score '" + std::string(fields[1]) + "'");
        }
        header_allowed = false;
        GoldEntry entry{std::string(trim(fields[0])), *score, std::nullopt};
        if (entry.lemma_key.empty()) throw DataError(where + ": empty word");
        if (fields.size() == 3) {
            const auto label = trim(fields[2]);
            if (label == "0") entry.binary_label = false;
            else if (label == "1") entry.binary_label = true;
            else throw DataError(where + ": binary label must be 0 or 1");
        }
        if (!seen.insert(entry.lemma_key).second) {
            throw DataError(where + ": duplicate word '" + entry.lemma_key + "'");
        }
        gold.entries.push_back(std::move(entry));
    }
    if (gold.entries.size() < 2) throw DataError("gold ranking needs at least 2 entries");
    return gold;
}

GoldRanking load_gold(const fs::path& path, GoldFormat format) {
    try {
        return parse_gold(read_text(path), format);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_gold(const fs::path& path, const GoldRanking& gold) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& e : gold.entries) {
        out << e.lemma_key << '\t' << e.graded_score;
        if (e.binary_label) out << '\t' << (*e.binary_label ? 1 : 0);
        out << '\n';
    }
    const std::string text = out.str();
    write_bytes(path, std::as_bytes(std::span(text.data(), text.size())));
}

std::vector<TargetWord> load_targets(const fs::path& path) {
    const std::string text = read_text(path);
    std::vector<TargetWord> targets;
    std::unordered_set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = split_fields(t, false);
        TargetWord w;
        w.lemma_key = std::string(trim(fields[0]));
        w.surface = fields.size() > 1 ? std::string(trim(fields[1])) : w.lemma_key;
        if (!seen.insert(w.lemma_key).second) {
            throw DataError(path.string() + ": duplicate target '" + w.lemma_key + "'");
        }
        targets.push_back(std::move(w));
    }
    return targets;
}

}  // namespace sscd
