#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sscd {

struct TargetWord {
    std::string surface;
    std::string lemma_key;
};

struct WordCount {
    std::string lemma_key;
    std::uint64_t occurrence_count = 0;

    bool operator==(const WordCount&) const = default;
};

/// Per-corpus metadata. `total_sentences` is |C|, used by the
/// corpus-size-normalized swap variant.
struct CorpusManifest {
    std::string corpus_id;
    std::string epoch_label;
    std::uint64_t total_sentences = 0;
    std::uint32_t embedding_dim = 0;
    std::vector<WordCount> words;

    /// Throws DataError when an invariant does not hold.
    void validate() const;
    std::optional<std::uint64_t> occurrence_count(std::string_view lemma_key) const;

    bool operator==(const CorpusManifest&) const = default;
};

/// All contextualised embeddings of one word in one corpus. Row i is the
/// embedding of the word in sentence_ids[i]. Stored row-major as float32,
/// the on-disk precision.
class SiblingSet {
public:
    SiblingSet() = default;
    SiblingSet(std::string lemma_key, std::string corpus_id, std::uint32_t dim,
               std::vector<float> values, std::vector<std::string> sentence_ids);

    const std::string& lemma_key() const noexcept { return lemma_key_; }
    const std::string& corpus_id() const noexcept { return corpus_id_; }
    std::size_t size() const noexcept { return sentence_ids_.size(); }
    bool empty() const noexcept { return sentence_ids_.empty(); }
    std::uint32_t dim() const noexcept { return dim_; }

    std::span<const float> row(std::size_t i) const {
        return {values_.data() + i * dim_, dim_};
    }
    std::span<const float> values() const noexcept { return values_; }
    const std::vector<std::string>& sentence_ids() const noexcept { return sentence_ids_; }

    /// New set holding the given rows of this one, in the given order.
    SiblingSet select(std::span<const std::size_t> rows) const;

    bool operator==(const SiblingSet&) const = default;

private:
    std::string lemma_key_;
    std::string corpus_id_;
    std::uint32_t dim_ = 0;
    std::vector<float> values_;
    std::vector<std::string> sentence_ids_;
};

struct GoldEntry {
    std::string lemma_key;
    double graded_score = 0.0;
    std::optional<bool> binary_label;
};

struct GoldRanking {
    std::vector<GoldEntry> entries;

    const GoldEntry* find(std::string_view lemma_key) const;
};

enum class GoldFormat { semeval_graded, liverpool };

GoldFormat parse_gold_format(std::string_view name);

// ---- Sibling file format ---------------------------------------------------
//
//   offset 0   "SSCD"                       magic
//          4   u32 version (= 1)
//          8   u32 N                         rows
//         12   u32 d                         dimension
//         16   N*d float32                   row-major
//          .   N x { u32 len, len bytes }    UTF-8 sentence ids
//
// All integers and floats little-endian.

inline constexpr std::uint32_t kSiblingFormatVersion = 1;

struct SiblingHeader {
    std::uint32_t version = 0;
    std::uint32_t rows = 0;
    std::uint32_t dim = 0;
};

/// Decodes a sibling file held in memory. Errors report the byte offset.
SiblingSet decode_sibling_set(std::span<const std::byte> bytes, std::string lemma_key = {},
                              std::string corpus_id = {});
std::vector<std::byte> encode_sibling_set(const SiblingSet& set);
SiblingHeader decode_sibling_header(std::span<const std::byte> bytes);

SiblingSet load_sibling_set(const std::filesystem::path& path, std::string lemma_key = {},
                            std::string corpus_id = {});
void write_sibling_set(const std::filesystem::path& path, const SiblingSet& set);

CorpusManifest load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);
std::string manifest_to_json(const CorpusManifest& manifest);
CorpusManifest manifest_from_json(std::string_view text);

/// File name of a word's sibling file inside a corpus directory:
/// the lemma with '/', '\\', '%', control bytes and a leading '.'
/// percent-encoded, plus the ".sscd" extension.
std::string sibling_file_name(std::string_view lemma_key);

/// A corpus directory: `manifest.json` plus one sibling file per word.
struct Corpus {
    std::filesystem::path dir;
    CorpusManifest manifest;
};

Corpus open_corpus(const std::filesystem::path& dir);

/// Loads a word's siblings and checks them against the manifest: row count
/// must equal the manifest occurrence count and dimension must match.
SiblingSet load_corpus_word(const Corpus& corpus, std::string_view lemma_key);

void check_manifest_consistency(const CorpusManifest& manifest, const SiblingSet& set);

void write_corpus(const std::filesystem::path& dir, const CorpusManifest& manifest,
                  std::span<const SiblingSet> sets);

GoldRanking load_gold(const std::filesystem::path& path, GoldFormat format);
GoldRanking parse_gold(std::string_view text, GoldFormat format);
void write_gold(const std::filesystem::path& path, const GoldRanking& gold);

/// One lemma per line; blank lines and '#' comments ignored. A second
/// tab-separated column, when present, is taken as the surface form.
std::vector<TargetWord> load_targets(const std::filesystem::path& path);

}  // namespace sscd
