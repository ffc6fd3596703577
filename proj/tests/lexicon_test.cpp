#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hmlid/error.hpp"
#include "hmlid/lexicon.hpp"

using namespace hmlid;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("hmlid_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("unigram lexicon counts corpus words") {
    const std::vector<std::string> corpus = {"गेल गेल"};
    const UnigramLexicon lex = build_unigram_lexicon(corpus, Lang::Magahi);
    CHECK(lex.language == Lang::Magahi);
    CHECK(lex.entries.size() == 1);
    CHECK(lex.entries.at("गेल") == 2);
    CHECK(lex.total_tokens == 2);
}

TEST_CASE("unigram lexicon counts across lines and skips hidden tokens") {
    const std::vector<std::string> corpus = {
        "आउ ऊ गेल ।",
        "ओकरा आउ कहलक",
        "आउ file123 गेल",
    };
    const UnigramLexicon lex = build_unigram_lexicon(corpus, Lang::Magahi);
    CHECK(lex.entries.at("आउ") == 3);
    CHECK(lex.entries.at("गेल") == 2);
    CHECK_FALSE(lex.entries.contains("file123"));
    CHECK_FALSE(lex.entries.contains("।"));
    // danda excluded from totals, the hidden token included
    CHECK(lex.total_tokens == 9);

    std::uint64_t sum = 0;
    for (const auto& [word, freq] : lex.entries) sum += freq;
    CHECK(sum == 8);
    CHECK(sum <= lex.total_tokens);
}

TEST_CASE("empty corpus builds an empty lexicon") {
    const std::vector<std::string> corpus;
    const UnigramLexicon lex = build_unigram_lexicon(corpus, Lang::Hindi);
    CHECK(lex.entries.empty());
    CHECK(lex.total_tokens == 0);
}

TEST_CASE("building is deterministic and permutation invariant") {
    const std::vector<std::string> corpus = {"आउ ऊ गेल", "ओकरा आउ", "गेल गेल"};
    std::vector<std::string> shuffled = {"गेल गेल", "आउ ऊ गेल", "ओकरा आउ"};
    CHECK(build_unigram_lexicon(corpus, Lang::Magahi) ==
          build_unigram_lexicon(corpus, Lang::Magahi));
    CHECK(build_unigram_lexicon(corpus, Lang::Magahi).entries ==
          build_unigram_lexicon(shuffled, Lang::Magahi).entries);
}

TEST_CASE("ngram dictionary enumerates within-line windows") {
    const std::vector<std::string> corpus = {"पहुंच गया घर"};
    const NgramDictionary bi = build_ngram_dictionary(corpus, Lang::Hindi, 2);
    CHECK(bi.entries.size() == 2);
    CHECK(bi.entries.at("पहुंच गया") == 1);
    CHECK(bi.entries.at("गया घर") == 1);

    const NgramDictionary tri = build_ngram_dictionary(corpus, Lang::Hindi, 3);
    CHECK(tri.entries.size() == 3);
    CHECK(tri.entries.at("पहुंच गया घर") == 1);
}

TEST_CASE("ngram windows never span punctuation or hidden tokens") {
    const std::vector<std::string> corpus = {"पहुंच गया । घर", "पहुंच abc घर"};
    const NgramDictionary dict = build_ngram_dictionary(corpus, Lang::Hindi, 3);
    CHECK(dict.entries.size() == 1);
    CHECK(dict.entries.at("पहुंच गया") == 1);
}

TEST_CASE("single-token lines contribute no windows") {
    const std::vector<std::string> corpus = {"गेल", "घर"};
    CHECK(build_ngram_dictionary(corpus, Lang::Hindi).entries.empty());
}

TEST_CASE("ngram max_n outside 2..3 is a configuration error") {
    const std::vector<std::string> corpus = {"क ख ग"};
    CHECK_THROWS_AS(build_ngram_dictionary(corpus, Lang::Hindi, 1), Error);
    CHECK_THROWS_AS(build_ngram_dictionary(corpus, Lang::Hindi, 4), Error);
    try {
        build_ngram_dictionary(corpus, Lang::Hindi, 4);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
}

TEST_CASE("lookup_unigram hits and misses") {
    const std::vector<std::string> corpus = {"आउ ऊ आउ"};
    const UnigramLexicon lex = build_unigram_lexicon(corpus, Lang::Magahi);

    const MatchResult hit = lookup_unigram(lex, "आउ");
    CHECK(hit.matched_length == 1);
    CHECK(hit.frequency == 2);
    CHECK(hit.source == MatchSource::Unigram);

    const MatchResult miss = lookup_unigram(lex, "गेल");
    CHECK(miss.matched_length == 0);
    CHECK(miss.frequency == 0);

    CHECK(lookup_unigram(lex, "abc").matched_length == 0);
}

TEST_CASE("match_multiword prefers the trigram over the bigram") {
    const std::vector<std::string> corpus = {"पहुंच गया घर", "पहुंच गया"};
    const NgramDictionary dict = build_ngram_dictionary(corpus, Lang::Hindi, 3);
    const auto tokens = tokenize(normalize("पहुंच गया घर"));

    const MatchResult m = match_multiword(dict, tokens, 0);
    CHECK(m.matched_length == 3);
    CHECK(m.source == MatchSource::Trigram);
    CHECK(m.frequency == 1);

    const MatchResult tail = match_multiword(dict, tokens, 2);
    CHECK(tail.matched_length == 0);

    CHECK_THROWS_AS(match_multiword(dict, tokens, 3), Error);
}

TEST_CASE("match_multiword refuses windows crossing hidden tokens") {
    const std::vector<std::string> corpus = {"पहुंच गया"};
    const NgramDictionary dict = build_ngram_dictionary(corpus, Lang::Hindi, 3);
    const auto tokens = tokenize(normalize("पहुंच abc गया"));
    CHECK(match_multiword(dict, tokens, 0).matched_length == 0);
}

TEST_CASE("lexicon files round trip") {
    TempDir tmp;
    const std::vector<std::string> corpus = {"आउ ऊ गेल ।", "ओकरा आउ कहलक"};
    const UnigramLexicon lex = build_unigram_lexicon(corpus, Lang::Magahi);
    save_lexicon(lex, tmp.path / "lex.tsv");
    CHECK(load_lexicon(tmp.path / "lex.tsv") == lex);

    const NgramDictionary dict = build_ngram_dictionary(corpus, Lang::Magahi, 3);
    save_ngram_dictionary(dict, tmp.path / "ngrams.tsv");
    CHECK(load_ngram_dictionary(tmp.path / "ngrams.tsv") == dict);
}

TEST_CASE("model files are written deterministically") {
    TempDir tmp;
    const std::vector<std::string> corpus = {"आउ ऊ गेल", "गेल आउ"};
    const UnigramLexicon lex = build_unigram_lexicon(corpus, Lang::Magahi);
    save_lexicon(lex, tmp.path / "a.tsv");
    save_lexicon(lex, tmp.path / "b.tsv");
    std::ifstream a(tmp.path / "a.tsv"), b(tmp.path / "b.tsv");
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(sa.starts_with("#lang=mag\ttotal=5\n"));
}

TEST_CASE("lexicon loader reports malformed input precisely") {
    TempDir tmp;

    write_file(tmp.path / "bad_freq.tsv", "#lang=mag\ttotal=3\nगेल\tx2\n");
    try {
        load_lexicon(tmp.path / "bad_freq.tsv");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    write_file(tmp.path / "dup.tsv", "#lang=mag\ttotal=3\nगेल\t1\nगेल\t2\n");
    try {
        load_lexicon(tmp.path / "dup.tsv");
        FAIL("expected integrity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Integrity);
    }

    write_file(tmp.path / "no_header.tsv", "गेल\t1\n");
    CHECK_THROWS_AS(load_lexicon(tmp.path / "no_header.tsv"), Error);

    CHECK_THROWS_AS(load_lexicon(tmp.path / "missing.tsv"), Error);
}

TEST_CASE("empty lexicon file with a valid header loads as empty") {
    TempDir tmp;
    write_file(tmp.path / "empty.tsv", "#lang=hin\ttotal=0\n");
    const UnigramLexicon lex = load_lexicon(tmp.path / "empty.tsv");
    CHECK(lex.language == Lang::Hindi);
    CHECK(lex.entries.empty());
    CHECK(lex.total_tokens == 0);
}

TEST_CASE("imported word lists default to frequency 1") {
    TempDir tmp;
    write_file(tmp.path / "import.tsv", "#lang=mag\ttotal=0\nआउ\nगेल\t4\n");
    const UnigramLexicon lex = load_lexicon(tmp.path / "import.tsv");
    CHECK(lex.entries.at("आउ") == 1);
    CHECK(lex.entries.at("गेल") == 4);
}

TEST_CASE("loader normalizes keys so precomposed files stay queryable") {
    TempDir tmp;
    // U+0958 decomposes under canonical composition
    write_file(tmp.path / "nfc.tsv", "#lang=hin\ttotal=1\nक़\t1\n");
    const UnigramLexicon lex = load_lexicon(tmp.path / "nfc.tsv");
    CHECK(lex.entries.contains(normalize("क़")));
}
