#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "sscd/corpus.hpp"
#include "sscd/error.hpp"
#include "sscd/text.hpp"
#include "support.hpp"

using namespace sscd;
using sscd::testing::make_set;
using sscd::testing::random_set;
using sscd::testing::TempDir;

namespace {

std::vector<std::byte> header_bytes(std::uint32_t n, std::uint32_t d) {
    std::vector<std::byte> out;
    for (char c : {'S', 'S', 'C', 'D'}) out.push_back(std::byte(c));
    for (std::uint32_t v : {1u, n, d}) {
        for (int i = 0; i < 4; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
    }
    return out;
}

CorpusManifest manifest_for(const std::vector<SiblingSet>& sets, std::string id) {
    CorpusManifest m{id, "epoch", 1000, sets.empty() ? 4u : sets.front().dim(), {}};
    for (const auto& s : sets) m.words.push_back({s.lemma_key(), s.size()});
    return m;
}

}  // namespace

TEST_CASE("sibling file with N=3, d=4 round-trips") {
    const SiblingSet s = make_set(4, {1, 2, 3, 4, 5, 6, 7, 8, -1.5f, 0, 0.25f, 1e-30f}, "cell", "c1");
    const auto bytes = encode_sibling_set(s);
    CHECK(bytes.size() == 16 + 12 * 4 + 3 * (4 + 4));
    const SiblingSet back = decode_sibling_set(bytes, "cell", "c1");
    CHECK(back.size() == 3);
    CHECK(back.dim() == 4);
    CHECK(back == s);
}

TEST_CASE("header layout is little-endian magic, version, N, d") {
    const SiblingSet s = make_set(2, {1, 2}, "w", "c");
    const auto bytes = encode_sibling_set(s);
    const auto expected = header_bytes(1, 2);
    CHECK(std::equal(expected.begin(), expected.end(), bytes.begin()));
    float first = 0;
    std::memcpy(&first, bytes.data() + 16, 4);
    CHECK(first == 1.0f);
}

TEST_CASE("round-trip is bit-exact on random sets") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = std::uniform_int_distribution<std::size_t>(0, 40)(rng);
        const auto d = std::uniform_int_distribution<std::uint32_t>(1, 9)(rng);
        std::vector<float> values(n * d);
        std::uniform_int_distribution<std::uint32_t> bits;
        for (auto& v : values) {
            do {
                v = std::bit_cast<float>(bits(rng));
            } while (!std::isfinite(v));
        }
        const SiblingSet s = make_set(d, values, "lemma", "c");
        TempDir tmp;
        write_sibling_set(tmp / "x.sscd", s);
        const SiblingSet back = load_sibling_set(tmp / "x.sscd", "lemma", "c");
        REQUIRE(back.size() == n);
        for (std::size_t i = 0; i < values.size(); ++i) {
            CHECK(std::bit_cast<std::uint32_t>(back.values()[i]) == std::bit_cast<std::uint32_t>(values[i]));
        }
        CHECK(back.sentence_ids() == s.sentence_ids());
    }
}

TEST_CASE("row short of the declared dimension is a format error naming the row") {
    // Header says d=768; the last row carries 767 values and no ids follow.
    auto bytes = header_bytes(2, 768);
    bytes.resize(bytes.size() + (768 + 767) * 4, std::byte{0});
    try {
        decode_sibling_set(bytes);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        REQUIRE(e.row().has_value());
        CHECK(*e.row() == 1);
        CHECK(e.offset() == 16 + 768 * 4);
    }
}

TEST_CASE("empty sibling file is valid") {
    const auto bytes = header_bytes(0, 8);
    const SiblingSet s = decode_sibling_set(bytes, "gone", "c2");
    CHECK(s.empty());
    CHECK(s.dim() == 8);
}

TEST_CASE("malformed sibling files") {
    SUBCASE("bad magic") {
        auto bytes = header_bytes(0, 2);
        bytes[0] = std::byte{'X'};
        CHECK_THROWS_AS(decode_sibling_set(bytes), FormatError);
    }
    SUBCASE("wrong version") {
        auto bytes = header_bytes(0, 2);
        bytes[4] = std::byte{2};
        try {
            decode_sibling_set(bytes);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 4);
        }
    }
    SUBCASE("zero dimension") { CHECK_THROWS_AS(decode_sibling_set(header_bytes(0, 0)), FormatError); }
    SUBCASE("truncated header") {
        auto bytes = header_bytes(1, 2);
        bytes.resize(10);
        try {
            decode_sibling_set(bytes);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 8);
        }
    }
    SUBCASE("non-finite value") {
        auto bytes = encode_sibling_set(make_set(2, {1, 2, 3, 4}));
        const float nan = std::numeric_limits<float>::quiet_NaN();
        std::memcpy(bytes.data() + 16 + 3 * 4, &nan, 4);
        try {
            decode_sibling_set(bytes);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.row() == 1);
            CHECK(e.offset() == 16 + 12);
        }
    }
    SUBCASE("truncated sentence id") {
        auto bytes = encode_sibling_set(make_set(1, {1, 2}));
        bytes.pop_back();
        CHECK_THROWS_AS(decode_sibling_set(bytes), FormatError);
    }
    SUBCASE("trailing bytes") {
        auto bytes = encode_sibling_set(make_set(1, {1}));
        bytes.push_back(std::byte{0});
        try {
            decode_sibling_set(bytes);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == bytes.size() - 1);
        }
    }
}

TEST_CASE("sibling set rejects inconsistent construction") {
    CHECK_THROWS_AS(SiblingSet("w", "c", 3, {1, 2}, {"a"}), DimensionMismatch);
    CHECK_THROWS_AS(SiblingSet("w", "c", 1, {std::numeric_limits<float>::infinity()}, {"a"}), DataError);
    CHECK_THROWS_AS(SiblingSet("w", "c", 0, {}, {}), DataError);
}

TEST_CASE("select keeps the requested rows in order") {
    const SiblingSet s = make_set(2, {0, 1, 2, 3, 4, 5});
    const std::vector<std::size_t> rows = {2, 0};
    const SiblingSet t = s.select(rows);
    CHECK(t.size() == 2);
    CHECK(t.row(0)[0] == 4.0f);
    CHECK(t.row(1)[1] == 1.0f);
    CHECK(t.sentence_ids() == std::vector<std::string>{"c:2", "c:0"});
}

TEST_CASE("manifest JSON round-trip and validation") {
    const CorpusManifest m{"semeval-en-c1", "1810-1860", 253644, 768, {{"plane_nn", 120}, {"tip_vb", 0}}};
    CHECK(manifest_from_json(manifest_to_json(m)) == m);
    CHECK(m.occurrence_count("plane_nn") == 120);
    CHECK_FALSE(m.occurrence_count("nope").has_value());

    CorpusManifest dup = m;
    dup.words.push_back({"plane_nn", 3});
    CHECK_THROWS_AS(dup.validate(), DataError);
    CHECK_THROWS_AS(manifest_from_json("{\"corpus_id\": 3}"), DataError);
    CHECK_THROWS_AS(manifest_from_json("not json"), DataError);
}

TEST_CASE("sibling file names are filesystem-safe and injective on tricky keys") {
    CHECK(sibling_file_name("plane_nn") == "plane_nn.sscd");
    CHECK(sibling_file_name("a/b") == "a%2Fb.sscd");
    CHECK(sibling_file_name("..") == "%2E..sscd");
    CHECK(sibling_file_name("100%") == "100%25.sscd");
    CHECK(sibling_file_name("a%2Fb") != sibling_file_name("a/b"));
    CHECK(sibling_file_name("Überfall") == "Überfall.sscd");
}

TEST_CASE("corpus directory round-trip with manifest consistency") {
    std::mt19937_64 rng(3);
    std::vector<SiblingSet> sets = {random_set(rng, 7, 4, 0, 1, "cell", "c1"),
                                    random_set(rng, 3, 4, 0, 1, "a/b", "c1")};
    const CorpusManifest m = manifest_for(sets, "c1");
    TempDir tmp;
    write_corpus(tmp / "c1", m, sets);
    const Corpus c = open_corpus(tmp / "c1");
    CHECK(c.manifest == m);
    CHECK(load_corpus_word(c, "cell") == sets[0]);
    CHECK(load_corpus_word(c, "a/b") == sets[1]);
    CHECK_THROWS_AS(load_corpus_word(c, "missing"), DataError);

    SUBCASE("count mismatch") {
        CorpusManifest wrong = m;
        wrong.words[0].occurrence_count = 8;
        write_manifest(tmp / "c1" / "manifest.json", wrong);
        CHECK_THROWS_AS(load_corpus_word(open_corpus(tmp / "c1"), "cell"), DataError);
    }
    SUBCASE("dimension mismatch") {
        CorpusManifest wrong = m;
        wrong.embedding_dim = 5;
        write_manifest(tmp / "c1" / "manifest.json", wrong);
        CHECK_THROWS_AS(load_corpus_word(open_corpus(tmp / "c1"), "cell"), DimensionMismatch);
    }
    SUBCASE("zero-count word without a file is an empty set") {
        CorpusManifest more = m;
        more.words.push_back({"absent", 0});
        write_manifest(tmp / "c1" / "manifest.json", more);
        const SiblingSet s = load_corpus_word(open_corpus(tmp / "c1"), "absent");
        CHECK(s.empty());
        CHECK(s.dim() == 4);
    }
}

TEST_CASE("semeval gold parsing") {
    const GoldRanking g = parse_gold("attack_nn\t0.1\nbit_nn\t0.3\nplane_nn\t0.88\n", GoldFormat::semeval_graded);
    CHECK(g.entries.size() == 3);
    CHECK(g.find("plane_nn")->graded_score == doctest::Approx(0.88));
    CHECK_FALSE(g.find("plane_nn")->binary_label.has_value());

    const GoldRanking b = parse_gold("a\t0.5\t1\nb\t0.0\t0\n", GoldFormat::semeval_graded);
    CHECK(b.find("a")->binary_label == true);
    CHECK(b.find("b")->binary_label == false);

    CHECK_THROWS_AS(parse_gold("plane\t0.1\nplane\t0.2\n", GoldFormat::semeval_graded), DataError);
    CHECK_THROWS_AS(parse_gold("plane\tx\nbit\t0.2\n", GoldFormat::semeval_graded), DataError);
    CHECK_THROWS_AS(parse_gold("plane 0.1\nbit 0.2\n", GoldFormat::semeval_graded), DataError);
    CHECK_THROWS_AS(parse_gold("plane\t0.1\n", GoldFormat::semeval_graded), DataError);
}

TEST_CASE("liverpool gold parsing tolerates header and separators") {
    const GoldRanking g = parse_gold("word,score\npharaoh,3.5\r\nvar 1.0\nsalah\t2\n", GoldFormat::liverpool);
    CHECK(g.entries.size() == 3);
    CHECK(g.find("pharaoh")->graded_score == 3.5);
    CHECK(g.find("var")->graded_score == 1.0);
    CHECK_THROWS_AS(parse_gold("a,1\nb,x\n", GoldFormat::liverpool), DataError);
}

TEST_CASE("gold file round-trip and format names") {
    TempDir tmp;
    GoldRanking g;
    g.entries = {{"a", 0.1, std::nullopt}, {"b", 1.0 / 3.0, true}};
    write_gold(tmp / "gold.tsv", g);
    const GoldRanking back = load_gold(tmp / "gold.tsv", GoldFormat::semeval_graded);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.find("b")->graded_score == 1.0 / 3.0);
    CHECK(parse_gold_format("semeval") == GoldFormat::semeval_graded);
    CHECK(parse_gold_format("liverpool") == GoldFormat::liverpool);
    CHECK_THROWS(parse_gold_format("xml"));
}

TEST_CASE("targets file") {
    TempDir tmp;
    write_text_file((tmp / "t.txt").string(), "# targets\nplane_nn\tplane\n\ncell\n");
    const auto t = load_targets(tmp / "t.txt");
    REQUIRE(t.size() == 2);
    CHECK(t[0].lemma_key == "plane_nn");
    CHECK(t[0].surface == "plane");
    CHECK(t[1].lemma_key == "cell");
    write_text_file((tmp / "d.txt").string(), "cell\ncell\n");
    CHECK_THROWS_AS(load_targets(tmp / "d.txt"), DataError);
}
