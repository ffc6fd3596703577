#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hmlid/lang.hpp"
#include "hmlid/textcore.hpp"

namespace hmlid {

/// Per-language inventory of word-final grapheme sequences (1..3 clusters)
/// with corpus frequencies. A word never contributes itself as a suffix.
struct SuffixTable {
    Lang language = Lang::Hindi;
    std::unordered_map<std::string, std::uint64_t> entries;
    std::uint64_t total = 0;  // suffix occurrences counted while building

    bool operator==(const SuffixTable&) const = default;
};

class SuffixTableBuilder {
public:
    /// max_len must be 1, 2 or 3; anything else throws ErrorKind::Config.
    explicit SuffixTableBuilder(Lang language, int max_len = 3);

    void add_line(std::string_view line);
    void add_word(std::string_view word);
    SuffixTable build() { return std::move(table_); }

private:
    SuffixTable table_;
    int max_len_;
};

SuffixTable extract_suffixes(std::span<const std::string> corpus, Lang language, int max_len = 3);

struct SharedSuffixStats {
    std::size_t intersection_size = 0;
    std::size_t union_size = 0;
    double jaccard = 0.0;
};

/// Jaccard overlap of the two key sets, with the raw component counts.
/// Throws ErrorKind::Precondition when either table is empty.
SharedSuffixStats shared_suffix_fraction(const SuffixTable& a, const SuffixTable& b);

struct SuffixMatch {
    std::string suffix;
    std::uint64_t frequency = 0;
    std::size_t length = 0;  // in grapheme clusters
};

/// Longest table suffix of the word, probing lengths 3, 2, 1 (capped at one
/// less than the word's cluster count).
std::optional<SuffixMatch> match_suffix(std::string_view word, const SuffixTable& table);

/// Same TSV scheme as the lexicon files.
void save_suffix_table(const SuffixTable& table, const std::filesystem::path& path);
SuffixTable load_suffix_table(const std::filesystem::path& path);

enum class RuleKind { EndsWithSuffix, ContainsToken, TokenFollows };

struct Rule {
    std::string id;
    RuleKind kind = RuleKind::EndsWithSuffix;
    // ENDS: the suffix string; CONTAINS: the token; FOLLOWS: the trailing
    // token, with the preceding token (or "*" wildcard) in follows_prev.
    std::string pattern;
    std::string follows_prev;
    Lang language = Lang::Hindi;
    int priority = 0;
    std::string feature;  // optional free-text label from the 6th column

    std::uint64_t weight() const { return static_cast<std::uint64_t>(priority) + 1; }
    bool operator==(const Rule&) const = default;
};

/// Rules ordered by descending priority, stable within equal priority.
struct RuleSet {
    std::vector<Rule> rules;
    bool operator==(const RuleSet&) const = default;
};

/// Rule file: one rule per line,
/// `<id>\t<ENDS|CONTAINS|FOLLOWS>\t<pattern>\t<hin|mag>\t<priority>` with an
/// optional trailing feature-label column; `#` lines are comments.
RuleSet load_rules(const std::filesystem::path& path);
RuleSet parse_rules(std::string_view content, std::string_view source_name = "<rules>");
void save_rules(const RuleSet& rules, const std::filesystem::path& path);

/// The rule set written by the model builder when no rule file is supplied:
/// surface markers that separate Magahi from Hindi (nominal particles, the
/// numeral classifier, plural/tense suffixes, the ergative marker and
/// progressive auxiliaries).
RuleSet default_rules();

enum class EvidenceSource { UnigramLex, MultiwordLex, SuffixRule, SuffixTable };

struct Evidence {
    Lang language = Lang::Hindi;
    EvidenceSource source = EvidenceSource::UnigramLex;
    std::uint64_t weight = 0;
    std::string detail;

    bool operator==(const Evidence&) const = default;
};

std::string_view evidence_source_name(EvidenceSource s);

/// True when `rule` fires on the token at `index` (for TokenFollows, on the
/// pair ending at `index`).
bool rule_matches_at(const Rule& rule, std::span<const Token> tokens, std::size_t index);

/// Evaluates every rule against every applicable token; one Evidence per
/// match, weight = 1 + priority.
std::vector<Evidence> apply_rules(std::span<const Token> tokens, const RuleSet& rules);

}  // namespace hmlid
