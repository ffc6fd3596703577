#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmlid/lang.hpp"
#include "hmlid/lexicon.hpp"
#include "hmlid/suffixrules.hpp"
#include "hmlid/textcore.hpp"

namespace hmlid {

enum class Label { Hindi, Magahi, Other };
enum class Stage { ScriptGate, LexiconStage, SuffixStage, Fallback };

std::string_view label_name(Label l);
std::string_view stage_name(Stage s);

struct Thresholds {
    double min_devanagari_fraction = 0.5;  // must lie in (0, 1]
    double decision_margin = 0.0;          // 0 = any positive difference decides

    void validate() const;
    bool operator==(const Thresholds&) const = default;
};

/// Exact integer per-language evidence weights.
struct Scores {
    std::int64_t hin = 0;
    std::int64_t mag = 0;

    std::int64_t of(Lang l) const { return l == Lang::Hindi ? hin : mag; }
    std::int64_t& of(Lang l) { return l == Lang::Hindi ? hin : mag; }
    bool operator==(const Scores&) const = default;
};

struct Model {
    UnigramLexicon hin_lex{Lang::Hindi, {}, 0};
    UnigramLexicon mag_lex{Lang::Magahi, {}, 0};
    NgramDictionary hin_ngrams{Lang::Hindi, {}, 0};
    NgramDictionary mag_ngrams{Lang::Magahi, {}, 0};
    SuffixTable hin_suffixes{Lang::Hindi, {}, 0};
    SuffixTable mag_suffixes{Lang::Magahi, {}, 0};
    RuleSet rules;
    Thresholds thresholds;

    const UnigramLexicon& lex(Lang l) const { return l == Lang::Hindi ? hin_lex : mag_lex; }
    const NgramDictionary& ngrams(Lang l) const {
        return l == Lang::Hindi ? hin_ngrams : mag_ngrams;
    }
    const SuffixTable& suffixes(Lang l) const {
        return l == Lang::Hindi ? hin_suffixes : mag_suffixes;
    }

    /// Checks the six resources carry consistent language tags and the
    /// thresholds are in range; throws ErrorKind::Integrity / Config.
    void validate() const;
};

struct Verdict {
    Label label = Label::Other;
    Stage stage = Stage::Fallback;
    Scores scores;
    std::vector<Evidence> evidence;
    std::string echo;
    std::string error;  // non-empty only for failed lines in a batch

    bool ok() const { return error.empty(); }
};

struct StageResult {
    Scores scores;
    std::vector<Evidence> evidence;
    // Summed matched-entry frequencies of lexicon evidence; used only to
    // break score ties, so any uniform rescaling of the lexicons cannot
    // change a label.
    Scores lexicon_frequency;
};

/// Greedy left-to-right simultaneous lexicon mapping. At each position the
/// longest window level (trigram, then bigram, then unigram) that matches in
/// either language is scored for every language matching at that level;
/// weights are 3/2/1 per window.
StageResult score_lexicon_stage(std::span<const Token> tokens, const Model& model);

/// Per-token suffix/rule stage. Magahi rules and suffix table are consulted
/// first; the Hindi side of a token is checked only when the token produced
/// no Magahi evidence. Suffixes present in both tables emit nothing.
StageResult score_suffix_stage(std::span<const Token> tokens, const Model& model);

/// Suffix/rule evidence for the single token at `index` (same logic the
/// suffix stage applies per token).
std::vector<Evidence> suffix_evidence_for_token(std::span<const Token> tokens, std::size_t index,
                                                const Model& model);

/// The full cascade: script gate, lexicon stage, suffix stage with
/// accumulated scores, frequency-weighted tie-break, fallback to Other.
Verdict classify(std::string_view text, const Model& model);

/// One verdict per line, in input order. Per-line decode failures are
/// recorded in the corresponding verdict instead of aborting the batch.
std::vector<Verdict> classify_batch(std::span<const std::string> lines, const Model& model);

struct BuildOptions {
    int max_ngram = 3;
    bool exclusive_lexicon = false;  // drop unigrams present in both languages
};

/// Streaming model construction: feed corpus lines per language, then build.
/// One pass fills the lexicon, the ngram dictionary and the suffix table.
class ModelBuilder {
public:
    explicit ModelBuilder(const BuildOptions& options = {});

    void add_line(Lang lang, std::string_view line);
    Model build();

private:
    BuildOptions options_;
    UnigramLexiconBuilder hin_lex_, mag_lex_;
    NgramDictionaryBuilder hin_ngrams_, mag_ngrams_;
    SuffixTableBuilder hin_suffixes_, mag_suffixes_;
};

/// Builds all six corpus resources plus the default rules and thresholds.
Model build_model(std::span<const std::string> hin_corpus,
                  std::span<const std::string> mag_corpus, const BuildOptions& options = {});

// Model directory layout: hin.unigrams.tsv, mag.unigrams.tsv, hin.ngrams.tsv,
// mag.ngrams.tsv, hin.suffixes.tsv, mag.suffixes.tsv, rules.tsv,
// thresholds.tsv.
Model load_model(const std::filesystem::path& dir);
void save_model(const Model& model, const std::filesystem::path& dir);

Thresholds load_thresholds(const std::filesystem::path& path);
void save_thresholds(const Thresholds& thresholds, const std::filesystem::path& path);

/// Machine-readable verdict line:
/// `<label>\t<stage>\t<score_hin>\t<score_mag>\t<echo>` (tabs inside the echo
/// are flattened to spaces so the record stays five fields).
std::string verdict_to_tsv(const Verdict& v);

}  // namespace hmlid
