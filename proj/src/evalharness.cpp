#include "hmlid/evalharness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hmlid/error.hpp"

namespace hmlid {

namespace {

constexpr Label kLabels[] = {Label::Hindi, Label::Magahi, Label::Other};
constexpr Stage kStages[] = {Stage::ScriptGate, Stage::LexiconStage, Stage::SuffixStage,
                             Stage::Fallback};

std::size_t label_index(Label l) { return static_cast<std::size_t>(l); }

std::optional<Label> label_from_code(std::string_view code) {
    if (code == "hin") return Label::Hindi;
    if (code == "mag") return Label::Magahi;
    if (code == "other") return Label::Other;
    return std::nullopt;
}

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.emplace_back(line.substr(
            start, tab == std::string_view::npos ? line.size() - start : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return fields;
}

bool is_stage_token(std::string_view s) {
    return s == "script_gate" || s == "lexicon" || s == "suffix" || s == "fallback";
}

bool is_integer(std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string> split_commas(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        std::string_view piece =
            s.substr(start, comma == std::string_view::npos ? s.size() - start : comma - start);
        if (!piece.empty()) out.emplace_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string_view error_category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::NamedEntity: return "named_entity";
        case ErrorCategory::TypoSpelling: return "typo_spelling";
        case ErrorCategory::ShortSentence: return "short_sentence";
        case ErrorCategory::BorrowedLexicon: return "borrowed_lexicon";
        case ErrorCategory::Uncategorized: return "uncategorized";
    }
    return "uncategorized";
}

LabeledExample parse_testset_line(std::string_view line, std::size_t line_no,
                                  std::string_view source_name) {
    auto fail = [&](const std::string& what) -> void {
        throw Error(ErrorKind::Parse, std::string(source_name) + ":" +
                                          std::to_string(line_no) + ": " + what);
    };

    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < 2) fail("expected <label>\\t<sentence>");

    LabeledExample example;
    const auto gold = label_from_code(fields[0]);
    if (!gold) fail("unknown gold label '" + fields[0] + "'");
    example.gold = *gold;

    // Machine verdict lines round-trip: label, stage, two integer scores,
    // echo.
    if (fields.size() == 5 && is_stage_token(fields[1]) && is_integer(fields[2]) &&
        is_integer(fields[3])) {
        example.text = fields[4];
    } else if (fields.size() == 2) {
        example.text = fields[1];
    } else if (fields.size() == 3) {
        example.text = fields[1];
        example.annotations = split_commas(fields[2]);
    } else {
        fail("expected 2 or 3 fields, got " + std::to_string(fields.size()));
    }
    if (example.text.empty()) fail("empty sentence");
    return example;
}

std::vector<LabeledExample> parse_testset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::vector<LabeledExample> examples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        examples.push_back(parse_testset_line(line, line_no, path.string()));
    }
    if (in.bad()) throw Error(ErrorKind::Io, "read failure on " + path.string());
    return examples;
}

EvalReport evaluate(std::span<const LabeledExample> testset, const Model& model) {
    if (testset.empty()) throw Error(ErrorKind::Precondition, "evaluate: empty testset");

    EvalReport report;
    report.total = testset.size();
    for (Stage s : kStages) report.per_stage_counts[s] = 0;

    std::uint64_t correct = 0;
    for (const LabeledExample& example : testset) {
        const Verdict verdict = classify(example.text, model);
        ++report.confusion[label_index(example.gold)][label_index(verdict.label)];
        ++report.per_stage_counts[verdict.stage];
        if (verdict.label == example.gold) {
            ++correct;
        } else {
            report.errors.push_back(EvalError{example, verdict, {}});
        }
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.total);
    categorize_errors(report.errors, model);
    return report;
}

void categorize_errors(std::vector<EvalError>& errors, const Model& model) {
    for (EvalError& err : errors) {
        err.categories.clear();
        const std::vector<Token> tokens = tokenize(normalize(err.example.text));

        std::size_t non_punct = 0;
        bool borrowed = false;
        bool named_entity = false;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            const Token& tok = tokens[i];
            if (tok.script != ScriptClass::Punctuation) ++non_punct;
            if (!is_evidence_token(tok)) continue;
            const bool in_hin = model.hin_lex.entries.contains(tok.surface);
            const bool in_mag = model.mag_lex.entries.contains(tok.surface);
            if (in_hin && in_mag) borrowed = true;
            if (!in_hin && !in_mag &&
                suffix_evidence_for_token(tokens, i, model).empty())
                named_entity = true;
        }

        if (named_entity) err.categories.push_back(ErrorCategory::NamedEntity);
        if (std::find(err.example.annotations.begin(), err.example.annotations.end(), "typo") !=
            err.example.annotations.end())
            err.categories.push_back(ErrorCategory::TypoSpelling);
        if (non_punct <= 3) err.categories.push_back(ErrorCategory::ShortSentence);
        if (borrowed) err.categories.push_back(ErrorCategory::BorrowedLexicon);
        if (err.categories.empty()) err.categories.push_back(ErrorCategory::Uncategorized);
    }
}

std::string render_report_human(const EvalReport& report) {
    std::ostringstream out;
    std::uint64_t correct = 0;
    for (std::size_t i = 0; i < 3; ++i) correct += report.confusion[i][i];
    out << "accuracy: " << format_double(report.accuracy) << " (" << correct << "/"
        << report.total << ")\n";

    out << "confusion (gold rows, predicted columns):\n";
    out << "        ";
    for (Label l : kLabels) out << '\t' << label_name(l);
    out << '\n';
    for (Label g : kLabels) {
        out << "  " << label_name(g);
        for (Label p : kLabels) out << '\t' << report.confusion[label_index(g)][label_index(p)];
        out << '\n';
    }

    out << "stage counts:";
    for (const auto& [stage, count] : report.per_stage_counts)
        out << ' ' << stage_name(stage) << '=' << count;
    out << '\n';

    out << "errors: " << report.errors.size() << '\n';
    for (const EvalError& err : report.errors) {
        out << "  gold=" << label_name(err.example.gold)
            << " pred=" << label_name(err.verdict.label)
            << " stage=" << stage_name(err.verdict.stage) << " tags=";
        for (std::size_t i = 0; i < err.categories.size(); ++i) {
            if (i) out << ',';
            out << error_category_name(err.categories[i]);
        }
        out << "  " << err.example.text << '\n';
    }
    return out.str();
}

std::string render_report_tsv(const EvalReport& report) {
    std::ostringstream out;
    std::uint64_t correct = 0;
    for (std::size_t i = 0; i < 3; ++i) correct += report.confusion[i][i];
    out << "#accuracy\t" << format_double(report.accuracy) << '\t' << correct << '\t'
        << report.total << '\n';
    for (Label g : kLabels)
        for (Label p : kLabels)
            out << "#confusion\t" << label_name(g) << '\t' << label_name(p) << '\t'
                << report.confusion[label_index(g)][label_index(p)] << '\n';
    for (const auto& [stage, count] : report.per_stage_counts)
        out << "#stage\t" << stage_name(stage) << '\t' << count << '\n';
    for (const EvalError& err : report.errors) {
        std::string tags;
        for (std::size_t i = 0; i < err.categories.size(); ++i) {
            if (i) tags += ',';
            tags += error_category_name(err.categories[i]);
        }
        std::string text = err.example.text;
        std::replace(text.begin(), text.end(), '\t', ' ');
        out << "#error\t" << label_name(err.example.gold) << '\t'
            << label_name(err.verdict.label) << '\t' << stage_name(err.verdict.stage) << '\t'
            << tags << '\t' << text << '\n';
    }
    return out.str();
}

}  // namespace hmlid
