// hmlid — command-line identifier for Hindi vs. Magahi Devanagari text.
//
// Subcommands: build (corpus resources -> model dir), identify (classify
// lines), evaluate (labeled testset -> report), inspect (one word's evidence).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hmlid/classifier.hpp"
#include "hmlid/error.hpp"
#include "hmlid/evalharness.hpp"

using namespace hmlid;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Config: return kExitUsage;
        case ErrorKind::Io: return kExitIo;
        default: return kExitData;
    }
}

struct CommonOptions {
    std::string model_dir;
    std::optional<double> min_devanagari;
    std::optional<double> margin;
};

void add_model_options(CLI::App* cmd, CommonOptions& opts, bool required) {
    auto* model = cmd->add_option("--model,-m", opts.model_dir,
                                  "Model directory (defaults to $LID_MODEL_DIR)");
    model->envname("LID_MODEL_DIR");
    if (required) model->required();
    cmd->add_option("--min-devanagari", opts.min_devanagari,
                    "Script-gate threshold in (0,1], overrides the model value");
    cmd->add_option("--margin", opts.margin,
                    "Decision margin, overrides the model value");
}

Model load_model_with_overrides(const CommonOptions& opts) {
    Model model = load_model(opts.model_dir);
    if (opts.min_devanagari) model.thresholds.min_devanagari_fraction = *opts.min_devanagari;
    if (opts.margin) model.thresholds.decision_margin = *opts.margin;
    model.thresholds.validate();
    return model;
}

std::string human_phrase(Label label) {
    switch (label) {
        case Label::Magahi: return "The text is Magahi";
        case Label::Hindi: return "The text is Hindi";
        case Label::Other: return "Text is of other language";
    }
    return "Text is of other language";
}

json verdict_to_json(const Verdict& v) {
    json evidence = json::array();
    for (const Evidence& e : v.evidence) {
        evidence.push_back({{"lang", lang_code(e.language)},
                            {"source", evidence_source_name(e.source)},
                            {"weight", e.weight},
                            {"detail", e.detail}});
    }
    json out = {{"label", label_name(v.label)},
                {"stage", stage_name(v.stage)},
                {"scores", {{"hin", v.scores.hin}, {"mag", v.scores.mag}}},
                {"evidence", std::move(evidence)},
                {"echo", v.echo}};
    if (!v.ok()) out["error"] = v.error;
    return out;
}

// ---------------------------------------------------------------------------
// build

struct BuildArgs {
    std::string corpus_hin;
    std::string corpus_mag;
    CommonOptions common;
    int max_ngram = 3;
    bool exclusive = false;
};

struct CorpusStats {
    std::size_t lines = 0;
};

CorpusStats feed_corpus(ModelBuilder& builder, Lang lang, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open corpus file " + path);
    CorpusStats stats;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        try {
            builder.add_line(lang, line);
        } catch (const Error& e) {
            throw Error(e.kind(), path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        ++stats.lines;
    }
    if (in.bad()) throw Error(ErrorKind::Io, "read failure on " + path);
    return stats;
}

int run_build(const BuildArgs& args) {
    BuildOptions options;
    options.max_ngram = args.max_ngram;
    options.exclusive_lexicon = args.exclusive;

    ModelBuilder builder(options);
    const CorpusStats hin_stats = feed_corpus(builder, Lang::Hindi, args.corpus_hin);
    const CorpusStats mag_stats = feed_corpus(builder, Lang::Magahi, args.corpus_mag);

    Model model = builder.build();
    if (args.common.min_devanagari)
        model.thresholds.min_devanagari_fraction = *args.common.min_devanagari;
    if (args.common.margin) model.thresholds.decision_margin = *args.common.margin;
    model.thresholds.validate();

    if (hin_stats.lines == 0 || model.hin_lex.entries.empty())
        std::cerr << "warning: Hindi corpus " << args.corpus_hin
                  << " produced an empty lexicon\n";
    if (mag_stats.lines == 0 || model.mag_lex.entries.empty())
        std::cerr << "warning: Magahi corpus " << args.corpus_mag
                  << " produced an empty lexicon\n";

    save_model(model, args.common.model_dir);

    auto print_side = [&](const char* tag, const CorpusStats& stats, const UnigramLexicon& lex,
                          const NgramDictionary& ngrams, const SuffixTable& suffixes) {
        std::cout << tag << ": lines=" << stats.lines << " tokens=" << lex.total_tokens
                  << " unique_words=" << lex.entries.size()
                  << " ngrams=" << ngrams.entries.size()
                  << " unique_suffixes=" << suffixes.entries.size() << "\n";
    };
    print_side("hin", hin_stats, model.hin_lex, model.hin_ngrams, model.hin_suffixes);
    print_side("mag", mag_stats, model.mag_lex, model.mag_ngrams, model.mag_suffixes);

    if (!model.hin_suffixes.entries.empty() && !model.mag_suffixes.entries.empty()) {
        const SharedSuffixStats shared =
            shared_suffix_fraction(model.hin_suffixes, model.mag_suffixes);
        char pct[32];
        std::snprintf(pct, sizeof pct, "%.2f", shared.jaccard * 100.0);
        std::cout << "shared_suffixes: " << shared.intersection_size << "/"
                  << shared.union_size << " (" << pct << "%)\n";
    }
    std::cout << "model written to " << args.common.model_dir << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// identify

struct IdentifyArgs {
    std::string input = "-";
    CommonOptions common;
    std::string format = "human";
};

int run_identify(const IdentifyArgs& args) {
    const Model model = load_model_with_overrides(args.common);

    std::ifstream file;
    std::istream* in = &std::cin;
    if (args.input != "-") {
        file.open(args.input, std::ios::binary);
        if (!file) throw Error(ErrorKind::Io, "cannot open input file " + args.input);
        in = &file;
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(*in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Verdict verdict;
        try {
            verdict = classify(line, model);
        } catch (const Error& e) {
            verdict.label = Label::Other;
            verdict.stage = Stage::Fallback;
            verdict.error = e.what();
            std::cerr << "line " << line_no << ": " << e.what() << "\n";
        }
        if (args.format == "human")
            std::cout << human_phrase(verdict.label) << "\n";
        else if (args.format == "tsv")
            std::cout << verdict_to_tsv(verdict) << "\n";
        else
            std::cout << verdict_to_json(verdict).dump() << "\n";
    }
    if (in->bad()) throw Error(ErrorKind::Io, "read failure on input");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string testset;
    CommonOptions common;
    std::string format = "human";
};

int run_evaluate(const EvaluateArgs& args) {
    const Model model = load_model_with_overrides(args.common);
    const std::vector<LabeledExample> testset = parse_testset(args.testset);
    if (testset.empty())
        throw Error(ErrorKind::Parse, args.testset + ": testset has no examples");
    const EvalReport report = evaluate(testset, model);
    if (args.format == "tsv")
        std::cout << render_report_tsv(report);
    else
        std::cout << render_report_human(report) << "\n" << render_report_tsv(report);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// inspect

struct InspectArgs {
    std::string word;
    CommonOptions common;
};

int run_inspect(const InspectArgs& args) {
    const Model model = load_model_with_overrides(args.common);

    const std::string word = normalize(args.word);
    const std::vector<Token> tokens = tokenize(word);
    if (tokens.size() != 1 || !is_evidence_token(tokens[0]))
        throw Error(ErrorKind::Parse, "query must be a single Devanagari word");

    std::cout << "word: " << word << "\n";
    for (Lang lang : {Lang::Hindi, Lang::Magahi}) {
        const MatchResult m = lookup_unigram(model.lex(lang), word);
        std::cout << "unigram[" << lang_code(lang) << "]: ";
        if (m.matched_length > 0)
            std::cout << m.frequency << "\n";
        else
            std::cout << "absent\n";
    }
    for (Lang lang : {Lang::Hindi, Lang::Magahi}) {
        const auto hit = match_suffix(word, model.suffixes(lang));
        std::cout << "suffix[" << lang_code(lang) << "]: ";
        if (hit) {
            const SuffixTable& other =
                model.suffixes(lang == Lang::Hindi ? Lang::Magahi : Lang::Hindi);
            std::cout << hit->suffix << " freq=" << hit->frequency
                      << (other.entries.contains(hit->suffix) ? " (shared)" : "") << "\n";
        } else {
            std::cout << "none\n";
        }
    }
    bool any_rule = false;
    for (const Rule& rule : model.rules.rules) {
        const bool fires = rule_matches_at(rule, tokens, 0);
        const bool as_marker =
            rule.kind == RuleKind::TokenFollows && rule.pattern == word;
        if (!fires && !as_marker) continue;
        any_rule = true;
        std::cout << "rule: " << rule.id << " lang=" << lang_code(rule.language)
                  << " weight=" << rule.weight();
        if (as_marker && !fires) std::cout << " (needs preceding " << rule.follows_prev << ")";
        std::cout << "\n";
    }
    if (!any_rule) std::cout << "rule: none\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identifies whether Devanagari text is Hindi or Magahi"};
    app.require_subcommand(1);

    BuildArgs build_args;
    auto* build = app.add_subcommand(
        "build", "Build model resources from one Hindi and one Magahi corpus");
    build->add_option("corpus_hin", build_args.corpus_hin, "Hindi corpus, one sentence per line")
        ->required();
    build->add_option("corpus_mag", build_args.corpus_mag, "Magahi corpus, one sentence per line")
        ->required();
    add_model_options(build, build_args.common, true);
    build->add_option("--max-ngram", build_args.max_ngram, "Longest multiword window (2 or 3)")
        ->check(CLI::Range(2, 3));
    build->add_flag("--exclusive-lexicon", build_args.exclusive,
                    "Drop unigrams that appear in both corpora");

    IdentifyArgs identify_args;
    auto* identify =
        app.add_subcommand("identify", "Classify input lines (file or standard input)");
    identify->add_option("input", identify_args.input, "Input file, or - for standard input");
    add_model_options(identify, identify_args.common, true);
    identify->add_option("--format", identify_args.format, "Output format")
        ->check(CLI::IsMember({"human", "tsv", "jsonl"}));

    EvaluateArgs evaluate_args;
    auto* evaluate =
        app.add_subcommand("evaluate", "Score a labeled testset and print the report");
    evaluate->add_option("testset", evaluate_args.testset, "TSV testset: <hin|mag|other>\\t<text>")
        ->required();
    add_model_options(evaluate, evaluate_args.common, true);
    evaluate->add_option("--format", evaluate_args.format, "Report format")
        ->check(CLI::IsMember({"human", "tsv"}));

    InspectArgs inspect_args;
    auto* inspect =
        app.add_subcommand("inspect", "Show every piece of evidence one word can contribute");
    inspect->add_option("word", inspect_args.word, "A single Devanagari word")->required();
    add_model_options(inspect, inspect_args.common, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) return run_build(build_args);
        if (identify->parsed()) return run_identify(identify_args);
        if (evaluate->parsed()) return run_evaluate(evaluate_args);
        if (inspect->parsed()) return run_inspect(inspect_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
