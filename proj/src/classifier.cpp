#include "hmlid/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "hmlid/error.hpp"

namespace hmlid {

namespace {

constexpr Lang kBothLangs[] = {Lang::Hindi, Lang::Magahi};

MatchResult longest_window(const Model& model, Lang lang, std::span<const Token> tokens,
                           std::size_t i) {
    MatchResult multi = match_multiword(model.ngrams(lang), tokens, i);
    if (multi.matched_length > 0) return multi;
    return lookup_unigram(model.lex(lang), tokens[i].surface);
}

void add_rule_evidence(std::vector<Evidence>& out, const Model& model, Lang lang,
                       std::span<const Token> tokens, std::size_t index) {
    for (const Rule& rule : model.rules.rules) {
        if (rule.language != lang) continue;
        if (rule_matches_at(rule, tokens, index))
            out.push_back(Evidence{lang, EvidenceSource::SuffixRule, rule.weight(),
                                   rule.id + ":" + tokens[index].surface});
    }
}

void add_table_evidence(std::vector<Evidence>& out, const Model& model, Lang lang,
                        std::string_view word) {
    const auto hit = match_suffix(word, model.suffixes(lang));
    if (!hit) return;
    // A suffix shared by both languages carries no discriminative signal.
    const SuffixTable& other =
        model.suffixes(lang == Lang::Hindi ? Lang::Magahi : Lang::Hindi);
    if (other.entries.contains(hit->suffix)) return;
    out.push_back(Evidence{lang, EvidenceSource::SuffixTable, 1,
                           hit->suffix + "<-" + std::string(word)});
}

}  // namespace

std::string_view label_name(Label l) {
    switch (l) {
        case Label::Hindi: return "hin";
        case Label::Magahi: return "mag";
        case Label::Other: return "other";
    }
    return "other";
}

std::string_view stage_name(Stage s) {
    switch (s) {
        case Stage::ScriptGate: return "script_gate";
        case Stage::LexiconStage: return "lexicon";
        case Stage::SuffixStage: return "suffix";
        case Stage::Fallback: return "fallback";
    }
    return "fallback";
}

void Thresholds::validate() const {
    if (!(min_devanagari_fraction > 0.0) || min_devanagari_fraction > 1.0)
        throw Error(ErrorKind::Config, "min_devanagari_fraction must lie in (0, 1]");
    if (decision_margin < 0.0)
        throw Error(ErrorKind::Config, "decision_margin must be non-negative");
}

void Model::validate() const {
    thresholds.validate();
    if (hin_lex.language != Lang::Hindi || hin_ngrams.language != Lang::Hindi ||
        hin_suffixes.language != Lang::Hindi)
        throw Error(ErrorKind::Integrity, "hin resources carry a non-hin language tag");
    if (mag_lex.language != Lang::Magahi || mag_ngrams.language != Lang::Magahi ||
        mag_suffixes.language != Lang::Magahi)
        throw Error(ErrorKind::Integrity, "mag resources carry a non-mag language tag");
}

StageResult score_lexicon_stage(std::span<const Token> tokens, const Model& model) {
    StageResult result;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (!is_evidence_token(tokens[i])) {
            ++i;
            continue;
        }
        MatchResult hin = longest_window(model, Lang::Hindi, tokens, i);
        MatchResult mag = longest_window(model, Lang::Magahi, tokens, i);
        const std::size_t level = std::max(hin.matched_length, mag.matched_length);
        if (level == 0) {
            ++i;
            continue;
        }
        for (Lang lang : kBothLangs) {
            const MatchResult& m = lang == Lang::Hindi ? hin : mag;
            if (m.matched_length != level) continue;  // lost to a longer window
            const EvidenceSource source =
                level == 1 ? EvidenceSource::UnigramLex : EvidenceSource::MultiwordLex;
            result.scores.of(lang) += static_cast<std::int64_t>(level);
            result.lexicon_frequency.of(lang) += static_cast<std::int64_t>(m.frequency);
            result.evidence.push_back(Evidence{lang, source, level,
                                               join_ngram(tokens, i, level)});
        }
        i += level;
    }
    return result;
}

std::vector<Evidence> suffix_evidence_for_token(std::span<const Token> tokens, std::size_t index,
                                                const Model& model) {
    std::vector<Evidence> out;
    if (index >= tokens.size() || !is_evidence_token(tokens[index])) return out;

    // Magahi first; the Hindi side runs only when the token said nothing
    // about Magahi.
    add_rule_evidence(out, model, Lang::Magahi, tokens, index);
    add_table_evidence(out, model, Lang::Magahi, tokens[index].surface);
    if (!out.empty()) return out;

    add_rule_evidence(out, model, Lang::Hindi, tokens, index);
    add_table_evidence(out, model, Lang::Hindi, tokens[index].surface);
    return out;
}

StageResult score_suffix_stage(std::span<const Token> tokens, const Model& model) {
    StageResult result;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::vector<Evidence> per_token = suffix_evidence_for_token(tokens, i, model);
        for (Evidence& ev : per_token) {
            result.scores.of(ev.language) += static_cast<std::int64_t>(ev.weight);
            result.evidence.push_back(std::move(ev));
        }
    }
    return result;
}

Verdict classify(std::string_view text, const Model& model) {
    Verdict verdict;
    const std::string normalized = normalize(text);
    verdict.echo = normalized;

    const ScriptReport report = detect_script(normalized);
    if (report.devanagari_fraction < model.thresholds.min_devanagari_fraction) {
        verdict.label = Label::Other;
        verdict.stage = Stage::ScriptGate;
        return verdict;
    }

    const std::vector<Token> tokens = tokenize(normalized);

    StageResult lex = score_lexicon_stage(tokens, model);
    const double margin = model.thresholds.decision_margin;

    auto delta = [](const Scores& s) {
        return std::abs(static_cast<double>(s.mag - s.hin));
    };
    auto top = [](const Scores& s) { return std::max(s.hin, s.mag); };

    if (top(lex.scores) > 0 && delta(lex.scores) > margin) {
        verdict.label = lex.scores.mag > lex.scores.hin ? Label::Magahi : Label::Hindi;
        verdict.stage = Stage::LexiconStage;
        verdict.scores = lex.scores;
        verdict.evidence = std::move(lex.evidence);
        return verdict;
    }

    StageResult suf = score_suffix_stage(tokens, model);
    Scores combined{lex.scores.hin + suf.scores.hin, lex.scores.mag + suf.scores.mag};
    verdict.scores = combined;
    verdict.evidence = std::move(lex.evidence);
    verdict.evidence.insert(verdict.evidence.end(),
                            std::make_move_iterator(suf.evidence.begin()),
                            std::make_move_iterator(suf.evidence.end()));

    if (top(combined) == 0) {
        verdict.label = Label::Other;
        verdict.stage = Stage::Fallback;
        return verdict;
    }

    verdict.stage = Stage::SuffixStage;
    if (delta(combined) > margin) {
        verdict.label = combined.mag > combined.hin ? Label::Magahi : Label::Hindi;
        return verdict;
    }

    // Tie within the margin: fall back to frequency-weighted lexicon
    // evidence, then give up and answer Other.
    const Scores& freq = lex.lexicon_frequency;
    if (freq.mag > freq.hin)
        verdict.label = Label::Magahi;
    else if (freq.hin > freq.mag)
        verdict.label = Label::Hindi;
    else
        verdict.label = Label::Other;
    return verdict;
}

std::vector<Verdict> classify_batch(std::span<const std::string> lines, const Model& model) {
    std::vector<Verdict> verdicts;
    verdicts.reserve(lines.size());
    for (const std::string& line : lines) {
        try {
            verdicts.push_back(classify(line, model));
        } catch (const Error& e) {
            Verdict v;
            v.label = Label::Other;
            v.stage = Stage::Fallback;
            v.error = e.what();
            verdicts.push_back(std::move(v));
        }
    }
    return verdicts;
}

ModelBuilder::ModelBuilder(const BuildOptions& options)
    : options_(options),
      hin_lex_(Lang::Hindi),
      mag_lex_(Lang::Magahi),
      hin_ngrams_(Lang::Hindi, options.max_ngram),
      mag_ngrams_(Lang::Magahi, options.max_ngram),
      hin_suffixes_(Lang::Hindi),
      mag_suffixes_(Lang::Magahi) {}

void ModelBuilder::add_line(Lang lang, std::string_view line) {
    const std::vector<Token> tokens = tokenize(normalize(line));
    UnigramLexiconBuilder& lex = lang == Lang::Hindi ? hin_lex_ : mag_lex_;
    NgramDictionaryBuilder& ngrams = lang == Lang::Hindi ? hin_ngrams_ : mag_ngrams_;
    SuffixTableBuilder& suffixes = lang == Lang::Hindi ? hin_suffixes_ : mag_suffixes_;
    lex.add_tokens(tokens);
    ngrams.add_tokens(tokens);
    for (const Token& tok : tokens)
        if (is_evidence_token(tok)) suffixes.add_word(tok.surface);
}

Model ModelBuilder::build() {
    Model model;
    model.hin_lex = hin_lex_.build();
    model.mag_lex = mag_lex_.build();
    model.hin_ngrams = hin_ngrams_.build();
    model.mag_ngrams = mag_ngrams_.build();
    model.hin_suffixes = hin_suffixes_.build();
    model.mag_suffixes = mag_suffixes_.build();
    model.rules = default_rules();

    if (options_.exclusive_lexicon) {
        // Keep only words exclusive to one language; filter against the
        // original vocabularies, not the already-pruned ones.
        std::unordered_set<std::string> hin_vocab, mag_vocab;
        for (const auto& [word, freq] : model.hin_lex.entries) hin_vocab.insert(word);
        for (const auto& [word, freq] : model.mag_lex.entries) mag_vocab.insert(word);
        std::erase_if(model.hin_lex.entries,
                      [&](const auto& kv) { return mag_vocab.contains(kv.first); });
        std::erase_if(model.mag_lex.entries,
                      [&](const auto& kv) { return hin_vocab.contains(kv.first); });
    }
    return model;
}

Model build_model(std::span<const std::string> hin_corpus,
                  std::span<const std::string> mag_corpus, const BuildOptions& options) {
    ModelBuilder builder(options);
    for (const std::string& line : hin_corpus) builder.add_line(Lang::Hindi, line);
    for (const std::string& line : mag_corpus) builder.add_line(Lang::Magahi, line);
    return builder.build();
}

// ---------------------------------------------------------------------------
// Model directory I/O

Thresholds load_thresholds(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    Thresholds t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error(ErrorKind::Parse,
                        path.string() + ":" + std::to_string(line_no) + ": expected key\tvalue");
        const std::string key = line.substr(0, tab);
        const std::string value = line.substr(tab + 1);
        double parsed = 0.0;
        try {
            std::size_t used = 0;
            parsed = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) +
                                              ": bad numeric value '" + value + "'");
        }
        if (key == "min_devanagari_fraction")
            t.min_devanagari_fraction = parsed;
        else if (key == "decision_margin")
            t.decision_margin = parsed;
        else
            throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) +
                                              ": unknown key '" + key + "'");
    }
    if (in.bad()) throw Error(ErrorKind::Io, "read failure on " + path.string());
    t.validate();
    return t;
}

void save_thresholds(const Thresholds& thresholds, const std::filesystem::path& path) {
    thresholds.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << "min_devanagari_fraction\t" << thresholds.min_devanagari_fraction << "\n"
        << "decision_margin\t" << thresholds.decision_margin << "\n";
    if (!out.flush()) throw Error(ErrorKind::Io, "write failure on " + path.string());
}

namespace {

void require_lang(const std::filesystem::path& file, Lang expected, Lang found) {
    if (expected != found)
        throw Error(ErrorKind::Integrity, file.string() + ": expected lang=" +
                                              std::string(lang_code(expected)) + ", found lang=" +
                                              std::string(lang_code(found)));
}

}  // namespace

Model load_model(const std::filesystem::path& dir) {
    Model model;
    model.hin_lex = load_lexicon(dir / "hin.unigrams.tsv");
    require_lang(dir / "hin.unigrams.tsv", Lang::Hindi, model.hin_lex.language);
    model.mag_lex = load_lexicon(dir / "mag.unigrams.tsv");
    require_lang(dir / "mag.unigrams.tsv", Lang::Magahi, model.mag_lex.language);
    model.hin_ngrams = load_ngram_dictionary(dir / "hin.ngrams.tsv");
    require_lang(dir / "hin.ngrams.tsv", Lang::Hindi, model.hin_ngrams.language);
    model.mag_ngrams = load_ngram_dictionary(dir / "mag.ngrams.tsv");
    require_lang(dir / "mag.ngrams.tsv", Lang::Magahi, model.mag_ngrams.language);
    model.hin_suffixes = load_suffix_table(dir / "hin.suffixes.tsv");
    require_lang(dir / "hin.suffixes.tsv", Lang::Hindi, model.hin_suffixes.language);
    model.mag_suffixes = load_suffix_table(dir / "mag.suffixes.tsv");
    require_lang(dir / "mag.suffixes.tsv", Lang::Magahi, model.mag_suffixes.language);
    model.rules = load_rules(dir / "rules.tsv");
    model.thresholds = load_thresholds(dir / "thresholds.tsv");
    model.validate();
    return model;
}

void save_model(const Model& model, const std::filesystem::path& dir) {
    model.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    save_lexicon(model.hin_lex, dir / "hin.unigrams.tsv");
    save_lexicon(model.mag_lex, dir / "mag.unigrams.tsv");
    save_ngram_dictionary(model.hin_ngrams, dir / "hin.ngrams.tsv");
    save_ngram_dictionary(model.mag_ngrams, dir / "mag.ngrams.tsv");
    save_suffix_table(model.hin_suffixes, dir / "hin.suffixes.tsv");
    save_suffix_table(model.mag_suffixes, dir / "mag.suffixes.tsv");
    save_rules(model.rules, dir / "rules.tsv");
    save_thresholds(model.thresholds, dir / "thresholds.tsv");
}

std::string verdict_to_tsv(const Verdict& v) {
    std::string echo = v.echo;
    std::replace(echo.begin(), echo.end(), '\t', ' ');
    std::string out;
    out += label_name(v.label);
    out += '\t';
    out += stage_name(v.stage);
    out += '\t';
    out += std::to_string(v.scores.hin);
    out += '\t';
    out += std::to_string(v.scores.mag);
    out += '\t';
    out += echo;
    return out;
}

}  // namespace hmlid
