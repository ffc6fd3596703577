#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hmlid/classifier.hpp"

namespace hmlid {

struct LabeledExample {
    Label gold = Label::Other;
    std::string text;
    // Optional annotation tokens from a trailing testset column ("typo"
    // drives the TypoSpelling category).
    std::vector<std::string> annotations;

    bool operator==(const LabeledExample&) const = default;
};

enum class ErrorCategory { NamedEntity, TypoSpelling, ShortSentence, BorrowedLexicon, Uncategorized };

std::string_view error_category_name(ErrorCategory c);

struct EvalError {
    LabeledExample example;
    Verdict verdict;
    std::vector<ErrorCategory> categories;
};

struct EvalReport {
    std::size_t total = 0;
    double accuracy = 0.0;
    // Rows are gold labels, columns predictions, indexed Hindi/Magahi/Other.
    std::array<std::array<std::uint64_t, 3>, 3> confusion{};
    std::map<Stage, std::size_t> per_stage_counts;
    std::vector<EvalError> errors;
};

/// Testset file: `<hin|mag|other>\t<sentence>` per line, optional trailing
/// annotation column (comma-separated tokens). Lines in the machine verdict
/// format (`<label>\t<stage>\t<hin>\t<mag>\t<echo>`) are accepted too, so
/// identify output can be fed straight back in.
std::vector<LabeledExample> parse_testset(const std::filesystem::path& path);
LabeledExample parse_testset_line(std::string_view line, std::size_t line_no,
                                  std::string_view source_name);

/// Classifies every example and assembles accuracy, the 3x3 confusion
/// matrix, per-stage counts and the categorized error list. Throws
/// ErrorKind::Precondition on an empty testset.
EvalReport evaluate(std::span<const LabeledExample> testset, const Model& model);

/// Applies the error-category heuristics in place (ShortSentence,
/// BorrowedLexicon, NamedEntity, annotation-driven TypoSpelling,
/// Uncategorized fallback). Never drops or duplicates an error.
void categorize_errors(std::vector<EvalError>& errors, const Model& model);

std::string render_report_human(const EvalReport& report);
std::string render_report_tsv(const EvalReport& report);

}  // namespace hmlid
