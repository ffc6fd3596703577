#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hmlid/classifier.hpp"
#include "hmlid/error.hpp"

using namespace hmlid;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kMagCorpus = {
    "ऊ घरवा गेल ।",
    "हमरा एगो अमवा चाही",
    "ओकरा तीनगो रोटिया देलक",
    "लइकन खेतवा में खेलत हई",
    "आउ ऊ गेल",
};

const std::vector<std::string> kHinCorpus = {
    "राम ने सीता को आम दिया ।",
    "लड़का विद्यालय जा रहा है",
    "वह घर गया",
    "ठेका मजदूरों के लिए",
    "पहुंच गया घर",
};

Model fixture_model() { return build_model(kHinCorpus, kMagCorpus); }

std::int64_t evidence_sum(const Verdict& v, Lang lang) {
    std::int64_t sum = 0;
    for (const Evidence& e : v.evidence)
        if (e.language == lang) sum += static_cast<std::int64_t>(e.weight);
    return sum;
}

bool has_suffix_evidence(const Verdict& v) {
    for (const Evidence& e : v.evidence)
        if (e.source == EvidenceSource::SuffixRule || e.source == EvidenceSource::SuffixTable)
            return true;
    return false;
}

}  // namespace

TEST_CASE("thresholds validate their ranges") {
    const Thresholds zero_gate{0.0, 0.0};
    const Thresholds gate_above_one{1.5, 0.0};
    const Thresholds negative_margin{0.5, -1.0};
    const Thresholds full_gate{1.0, 0.0};
    const Thresholds wide_margin{0.5, 2.0};
    CHECK_THROWS_AS(zero_gate.validate(), Error);
    CHECK_THROWS_AS(gate_above_one.validate(), Error);
    CHECK_THROWS_AS(negative_margin.validate(), Error);
    CHECK_NOTHROW(full_gate.validate());
    CHECK_NOTHROW(wide_margin.validate());
}

TEST_CASE("lexicon stage scores only the matching language") {
    const Model model = fixture_model();
    const auto tokens = tokenize(normalize("हमरा एगो अमवा चाही"));
    const StageResult r = score_lexicon_stage(tokens, model);
    CHECK(r.scores.mag > 0);
    CHECK(r.scores.hin == 0);
    CHECK_FALSE(r.evidence.empty());
}

TEST_CASE("lexicon stage scores nothing for unknown words") {
    const Model model = fixture_model();
    const auto tokens = tokenize(normalize("कखग चछज"));
    const StageResult r = score_lexicon_stage(tokens, model);
    CHECK(r.scores.hin == 0);
    CHECK(r.scores.mag == 0);
    CHECK(r.evidence.empty());
}

TEST_CASE("a trigram match is one evidence item, not three unigrams") {
    const Model model = fixture_model();
    const auto tokens = tokenize(normalize("ठेका मजदूरों के"));
    const StageResult r = score_lexicon_stage(tokens, model);
    REQUIRE(r.evidence.size() == 1);
    CHECK(r.evidence[0].source == EvidenceSource::MultiwordLex);
    CHECK(r.evidence[0].weight == 3);
    CHECK(r.evidence[0].detail == "ठेका मजदूरों के");
    CHECK(r.scores.hin == 3);
    CHECK(r.scores.mag == 0);
}

TEST_CASE("hidden tokens break multiword windows but not unigram hits") {
    const Model model = fixture_model();
    const auto tokens = tokenize(normalize("ठेका abc मजदूरों"));
    const StageResult r = score_lexicon_stage(tokens, model);
    CHECK(r.scores.hin == 2);  // two unigram hits
    for (const Evidence& e : r.evidence) CHECK(e.source == EvidenceSource::UnigramLex);
}

TEST_CASE("suffix stage: shared suffixes emit nothing") {
    Model model;
    model.mag_suffixes.entries = {{"ल", 5}};
    model.hin_suffixes.entries = {{"ल", 3}};
    const auto tokens = tokenize(normalize("गेल"));
    const StageResult r = score_suffix_stage(tokens, model);
    CHECK(r.evidence.empty());
    CHECK(r.scores.hin == 0);
    CHECK(r.scores.mag == 0);
}

TEST_CASE("suffix stage: Magahi rule silences the Hindi side of that token") {
    Model model;
    model.rules = parse_rules("mag_go\tENDS\tगो\tmag\t3\n");
    model.hin_suffixes.entries = {{"गो", 9}};  // would match if it were consulted
    const auto tokens = tokenize(normalize("तीनगो"));
    const StageResult r = score_suffix_stage(tokens, model);
    REQUIRE(r.evidence.size() == 1);
    CHECK(r.evidence[0].language == Lang::Magahi);
    CHECK(r.evidence[0].source == EvidenceSource::SuffixRule);
    CHECK(r.evidence[0].weight == 4);
    CHECK(r.scores.hin == 0);
}

TEST_CASE("suffix stage: Hindi side runs when Magahi is silent") {
    Model model;
    model.rules = parse_rules("hin_ga\tENDS\tगा\thin\t1\n");
    model.hin_suffixes.entries = {{"गा", 2}};
    const auto tokens = tokenize(normalize("जाएगा"));
    const StageResult r = score_suffix_stage(tokens, model);
    REQUIRE(r.evidence.size() == 2);  // rule + unshared suffix
    CHECK(r.scores.hin == 3);
    CHECK(r.scores.mag == 0);
}

TEST_CASE("suffix stage: nothing matches, nothing scored") {
    Model model;
    const auto tokens = tokenize(normalize("कखग"));
    const StageResult r = score_suffix_stage(tokens, model);
    CHECK(r.evidence.empty());
}

TEST_CASE("classify: script gate sends non-Devanagari input to Other") {
    const Model model = fixture_model();
    const Verdict v = classify("hello world", model);
    CHECK(v.label == Label::Other);
    CHECK(v.stage == Stage::ScriptGate);
    CHECK(v.evidence.empty());
    CHECK(v.echo == "hello world");
}

TEST_CASE("classify: script gate dominates regardless of lexicon contents") {
    Model model = fixture_model();
    model.thresholds.min_devanagari_fraction = 0.9;
    // Half the letter tokens are Latin; the Magahi words would otherwise win.
    const Verdict v = classify("घरवा गेल went home", model);
    CHECK(v.label == Label::Other);
    CHECK(v.stage == Stage::ScriptGate);
}

TEST_CASE("classify: lexicon stage decides exclusive vocabulary") {
    const Model model = fixture_model();
    const Verdict mag = classify("हमरा एगो अमवा चाही", model);
    CHECK(mag.label == Label::Magahi);
    CHECK(mag.stage == Stage::LexiconStage);
    CHECK_FALSE(has_suffix_evidence(mag));

    const Verdict hin = classify("राम ने आम दिया", model);
    CHECK(hin.label == Label::Hindi);
    CHECK(hin.stage == Stage::LexiconStage);
}

TEST_CASE("classify: named-entity sentence falls through to the suffix stage") {
    // Both lexicons know का and हो equally well; रामौतार is out of
    // vocabulary, so the lexicon stage ties and the suffix stage decides.
    Model model;
    model.hin_lex.entries = {{"का", 4}, {"हो", 4}};
    model.hin_lex.total_tokens = 8;
    model.mag_lex.entries = {{"का", 4}, {"हो", 4}};
    model.mag_lex.total_tokens = 8;
    model.rules = default_rules();

    const Verdict v = classify("का हो रामौतार ।", model);
    CHECK(v.stage == Stage::SuffixStage);
}

TEST_CASE("classify: out-of-lexicon Magahi particles decide at the suffix stage") {
    const Model model = fixture_model();
    const Verdict v = classify("सोनमवा बगियवा", model);
    CHECK(v.label == Label::Magahi);
    CHECK(v.stage == Stage::SuffixStage);
    CHECK(has_suffix_evidence(v));
}

TEST_CASE("classify: evidence-free Devanagari input falls back to Other") {
    Model model;  // empty resources
    const Verdict v = classify("कखग चछज", model);
    CHECK(v.label == Label::Other);
    CHECK(v.stage == Stage::Fallback);
    CHECK(v.evidence.empty());
}

TEST_CASE("classify: frequency breaks exact score ties") {
    Model model;
    model.mag_lex.entries = {{"शब्द", 10}};
    model.mag_lex.total_tokens = 10;
    model.hin_lex.entries = {{"शब्द", 3}};
    model.hin_lex.total_tokens = 3;

    const Verdict v = classify("शब्द", model);
    CHECK(v.stage == Stage::SuffixStage);
    CHECK(v.label == Label::Magahi);
    CHECK(v.scores.hin == v.scores.mag);

    // Equal frequencies leave an unresolvable tie.
    model.mag_lex.entries["शब्द"] = 3;
    const Verdict tie = classify("शब्द", model);
    CHECK(tie.label == Label::Other);
    CHECK(tie.stage == Stage::SuffixStage);
}

TEST_CASE("classify: decision margin defers weak lexicon wins") {
    Model model;
    model.mag_lex.entries = {{"एगो", 2}, {"घरवा", 2}};
    model.mag_lex.total_tokens = 4;
    model.hin_lex.entries = {{"एगो", 1}};
    model.hin_lex.total_tokens = 1;

    // margin 0: mag wins at the lexicon stage (2 vs 1)
    Verdict v = classify("एगो घरवा", model);
    CHECK(v.stage == Stage::LexiconStage);
    CHECK(v.label == Label::Magahi);

    // margin 2: |2-1| <= 2, so the cascade continues and the frequency
    // tie-break settles it at the suffix stage
    model.thresholds.decision_margin = 2.0;
    v = classify("एगो घरवा", model);
    CHECK(v.stage == Stage::SuffixStage);
    CHECK(v.label == Label::Magahi);
}

TEST_CASE("classify: echo is the normalized input") {
    const Model model = fixture_model();
    const std::string raw = "घरवा‌ गेल ।";
    const Verdict v = classify(raw, model);
    CHECK(v.echo == normalize(raw));
}

TEST_CASE("classify: per-language score equals the sum of its evidence weights") {
    const Model model = fixture_model();
    for (const std::string line :
         {"हमरा एगो अमवा चाही", "राम ने आम दिया", "का हो रामौतार ।", "सोनमवा बगियवा",
          "घरवा गेल आउ घर गया"}) {
        const Verdict v = classify(line, model);
        CHECK(v.scores.hin == evidence_sum(v, Lang::Hindi));
        CHECK(v.scores.mag == evidence_sum(v, Lang::Magahi));
    }
}

TEST_CASE("classify: lexicon-stage verdicts carry no suffix evidence") {
    const Model model = fixture_model();
    for (const std::string line : kMagCorpus) {
        const Verdict v = classify(line, model);
        if (v.stage == Stage::LexiconStage) CHECK_FALSE(has_suffix_evidence(v));
    }
}

TEST_CASE("classify_batch preserves order and isolates bad lines") {
    const Model model = fixture_model();
    CHECK(classify_batch({}, model).empty());

    std::vector<std::string> lines = {"हमरा एगो अमवा चाही", "hello world",
                                      std::string("\xFF\xFE", 2), "राम ने आम दिया"};
    const auto verdicts = classify_batch(lines, model);
    REQUIRE(verdicts.size() == 4);
    CHECK(verdicts[0].label == Label::Magahi);
    CHECK(verdicts[1].label == Label::Other);
    CHECK_FALSE(verdicts[2].ok());
    CHECK(verdicts[2].error.find("invalid UTF-8") != std::string::npos);
    CHECK(verdicts[3].label == Label::Hindi);
}

TEST_CASE("classify_batch is independent of batch partitioning") {
    const Model model = fixture_model();
    std::vector<std::string> lines;
    for (const auto& l : kMagCorpus) lines.push_back(l);
    for (const auto& l : kHinCorpus) lines.push_back(l);

    const auto whole = classify_batch(lines, model);
    std::vector<Verdict> pieces;
    for (const auto& line : lines) pieces.push_back(classify(line, model));
    REQUIRE(whole.size() == pieces.size());
    for (std::size_t i = 0; i < whole.size(); ++i) {
        CHECK(whole[i].label == pieces[i].label);
        CHECK(whole[i].stage == pieces[i].stage);
        CHECK(verdict_to_tsv(whole[i]) == verdict_to_tsv(pieces[i]));
    }
}

TEST_CASE("repeated classification is byte-identical") {
    const Model model = fixture_model();
    std::vector<std::string> lines;
    for (const auto& l : kMagCorpus) lines.push_back(l);
    for (const auto& l : kHinCorpus) lines.push_back(l);
    lines.push_back("का हो रामौतार ।");

    std::string first, second;
    for (const Verdict& v : classify_batch(lines, model)) first += verdict_to_tsv(v) + "\n";
    for (const Verdict& v : classify_batch(lines, model)) second += verdict_to_tsv(v) + "\n";
    CHECK(first == second);
}

TEST_CASE("uniformly scaling lexicon frequencies never changes a label") {
    const Model model = fixture_model();
    Model scaled = model;
    for (auto& [k, v] : scaled.hin_lex.entries) v *= 7;
    for (auto& [k, v] : scaled.mag_lex.entries) v *= 7;
    for (auto& [k, v] : scaled.hin_ngrams.entries) v *= 7;
    for (auto& [k, v] : scaled.mag_ngrams.entries) v *= 7;
    for (auto& [k, v] : scaled.hin_suffixes.entries) v *= 7;
    for (auto& [k, v] : scaled.mag_suffixes.entries) v *= 7;

    std::vector<std::string> lines;
    for (const auto& l : kMagCorpus) lines.push_back(l);
    for (const auto& l : kHinCorpus) lines.push_back(l);
    lines.push_back("का हो रामौतार ।");
    lines.push_back("शब्द");
    lines.push_back("hello world");

    const auto base = classify_batch(lines, model);
    const auto after = classify_batch(lines, scaled);
    REQUIRE(base.size() == after.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(base[i].label == after[i].label);
}

TEST_CASE("verdict_to_tsv emits five fields with a flattened echo") {
    Verdict v;
    v.label = Label::Magahi;
    v.stage = Stage::LexiconStage;
    v.scores = {1, 5};
    v.echo = "क\tख";
    CHECK(verdict_to_tsv(v) == "mag\tlexicon\t1\t5\tक ख");
}

TEST_CASE("build_model fills all six resources plus rules") {
    const Model model = fixture_model();
    CHECK_FALSE(model.hin_lex.entries.empty());
    CHECK_FALSE(model.mag_lex.entries.empty());
    CHECK_FALSE(model.hin_ngrams.entries.empty());
    CHECK_FALSE(model.mag_ngrams.entries.empty());
    CHECK_FALSE(model.hin_suffixes.entries.empty());
    CHECK_FALSE(model.mag_suffixes.entries.empty());
    CHECK_FALSE(model.rules.rules.empty());
    CHECK_NOTHROW(model.validate());
}

TEST_CASE("exclusive lexicon filter drops words shared by both corpora") {
    // गेल appears in both corpora here
    const std::vector<std::string> hin = {"घर गया", "गेल"};
    const std::vector<std::string> mag = {"घरवा गेल"};
    BuildOptions opts;
    opts.exclusive_lexicon = true;
    const Model model = build_model(hin, mag, opts);
    CHECK_FALSE(model.hin_lex.entries.contains("गेल"));
    CHECK_FALSE(model.mag_lex.entries.contains("गेल"));
    CHECK(model.hin_lex.entries.contains("गया"));
    CHECK(model.mag_lex.entries.contains("घरवा"));
}

TEST_CASE("model save/load round trips through a directory") {
    const Model model = fixture_model();
    const fs::path dir =
        fs::temp_directory_path() / ("hmlid_model_" + std::to_string(std::random_device{}()));
    save_model(model, dir);

    const Model loaded = load_model(dir);
    CHECK(loaded.hin_lex == model.hin_lex);
    CHECK(loaded.mag_lex == model.mag_lex);
    CHECK(loaded.hin_ngrams == model.hin_ngrams);
    CHECK(loaded.mag_ngrams == model.mag_ngrams);
    CHECK(loaded.hin_suffixes == model.hin_suffixes);
    CHECK(loaded.mag_suffixes == model.mag_suffixes);
    CHECK(loaded.rules == model.rules);
    CHECK(loaded.thresholds == model.thresholds);

    // language-tag consistency is enforced on load
    std::ofstream bad(dir / "hin.unigrams.tsv", std::ios::binary | std::ios::trunc);
    bad << "#lang=mag\ttotal=0\n";
    bad.close();
    CHECK_THROWS_AS(load_model(dir), Error);

    std::error_code ec;
    fs::remove_all(dir, ec);
}

TEST_CASE("thresholds file round trips and validates") {
    const fs::path dir =
        fs::temp_directory_path() / ("hmlid_thr_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    const Thresholds t{0.75, 1.5};
    save_thresholds(t, dir / "thresholds.tsv");
    const Thresholds loaded = load_thresholds(dir / "thresholds.tsv");
    CHECK(loaded == t);

    std::ofstream bad(dir / "bad.tsv", std::ios::binary);
    bad << "min_devanagari_fraction\tzero\n";
    bad.close();
    CHECK_THROWS_AS(load_thresholds(dir / "bad.tsv"), Error);

    std::error_code ec;
    fs::remove_all(dir, ec);
}
