#include "hmlid/suffixrules.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hmlid/error.hpp"
#include "table_io.hpp"
#include "unicode.hpp"

namespace hmlid {

namespace {

std::string join_clusters(std::span<const std::string> clusters, std::size_t begin) {
    std::string out;
    for (std::size_t k = begin; k < clusters.size(); ++k) out += clusters[k];
    return out;
}

bool is_devanagari_pattern(std::string_view pattern) {
    if (pattern.empty()) return false;
    for (char32_t cp : uni::decode_utf8(normalize(pattern))) {
        if (classify_codepoint(cp) != ScriptClass::Devanagari) return false;
    }
    return true;
}

}  // namespace

SuffixTableBuilder::SuffixTableBuilder(Lang language, int max_len)
    : table_{language, {}, 0}, max_len_(max_len) {
    if (max_len < 1 || max_len > 3)
        throw Error(ErrorKind::Config, "max_len must be 1..3, got " + std::to_string(max_len));
}

void SuffixTableBuilder::add_line(std::string_view line) {
    for (const Token& tok : tokenize(normalize(line))) {
        if (is_evidence_token(tok)) add_word(tok.surface);
    }
}

void SuffixTableBuilder::add_word(std::string_view word) {
    const std::vector<std::string> clusters = grapheme_split(word);
    const std::size_t g = clusters.size();
    if (g < 2) return;  // a word is not a suffix of itself
    const std::size_t longest = std::min<std::size_t>(max_len_, g - 1);
    for (std::size_t k = 1; k <= longest; ++k) {
        ++table_.entries[join_clusters(clusters, g - k)];
        ++table_.total;
    }
}

SuffixTable extract_suffixes(std::span<const std::string> corpus, Lang language, int max_len) {
    SuffixTableBuilder builder(language, max_len);
    for (const std::string& line : corpus) builder.add_line(line);
    return builder.build();
}

SharedSuffixStats shared_suffix_fraction(const SuffixTable& a, const SuffixTable& b) {
    if (a.entries.empty() || b.entries.empty())
        throw Error(ErrorKind::Precondition,
                    "shared_suffix_fraction: both tables must be non-empty");
    std::size_t common = 0;
    for (const auto& [key, freq] : a.entries) {
        if (b.entries.contains(key)) ++common;
    }
    SharedSuffixStats stats;
    stats.intersection_size = common;
    stats.union_size = a.entries.size() + b.entries.size() - common;
    stats.jaccard = static_cast<double>(common) / static_cast<double>(stats.union_size);
    return stats;
}

std::optional<SuffixMatch> match_suffix(std::string_view word, const SuffixTable& table) {
    if (word.empty() || table.entries.empty()) return std::nullopt;
    const std::vector<std::string> clusters = grapheme_split(word);
    const std::size_t g = clusters.size();
    if (g < 2) return std::nullopt;
    const std::size_t longest = std::min<std::size_t>(3, g - 1);
    for (std::size_t k = longest; k >= 1; --k) {
        std::string suffix = join_clusters(clusters, g - k);
        const auto it = table.entries.find(suffix);
        if (it != table.entries.end()) return SuffixMatch{std::move(suffix), it->second, k};
    }
    return std::nullopt;
}

void save_suffix_table(const SuffixTable& table, const std::filesystem::path& path) {
    detail::save_tsv_table(path, table.language, table.total, table.entries);
}

SuffixTable load_suffix_table(const std::filesystem::path& path) {
    detail::TsvTable t = detail::load_tsv_table(path);
    return {t.language, std::move(t.entries), t.total};
}

// ---------------------------------------------------------------------------
// Rules

namespace {

std::string_view rule_kind_name(RuleKind k) {
    switch (k) {
        case RuleKind::EndsWithSuffix: return "ENDS";
        case RuleKind::ContainsToken: return "CONTAINS";
        case RuleKind::TokenFollows: return "FOLLOWS";
    }
    return "ENDS";
}

RuleSet make_ruleset(std::vector<Rule> rules, std::string_view source_name) {
    std::unordered_set<std::string_view> seen;
    for (const Rule& r : rules) {
        if (!seen.insert(r.id).second)
            throw Error(ErrorKind::Parse,
                        std::string(source_name) + ": duplicate rule id '" + r.id + "'");
    }
    std::stable_sort(rules.begin(), rules.end(),
                     [](const Rule& a, const Rule& b) { return a.priority > b.priority; });
    return RuleSet{std::move(rules)};
}

}  // namespace

RuleSet parse_rules(std::string_view content, std::string_view source_name) {
    std::vector<Rule> rules;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    auto fail = [&](const std::string& what) -> void {
        throw Error(ErrorKind::Parse, std::string(source_name) + ":" +
                                          std::to_string(line_no) + ": " + what);
    };

    while (pos <= content.size()) {
        const std::size_t eol = content.find('\n', pos);
        std::string_view line = content.substr(
            pos, eol == std::string_view::npos ? content.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? content.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t tab = line.find('\t', start);
            fields.emplace_back(line.substr(
                start, tab == std::string_view::npos ? line.size() - start : tab - start));
            if (tab == std::string_view::npos) break;
            start = tab + 1;
        }
        if (fields.size() < 5 || fields.size() > 6)
            fail("expected 5 fields (id, kind, pattern, lang, priority), got " +
                 std::to_string(fields.size()));

        Rule rule;
        rule.id = fields[0];
        if (rule.id.empty()) fail("empty rule id");

        if (fields[1] == "ENDS")
            rule.kind = RuleKind::EndsWithSuffix;
        else if (fields[1] == "CONTAINS")
            rule.kind = RuleKind::ContainsToken;
        else if (fields[1] == "FOLLOWS")
            rule.kind = RuleKind::TokenFollows;
        else
            fail("unknown rule kind '" + fields[1] + "'");

        if (rule.kind == RuleKind::TokenFollows) {
            const std::size_t sp = fields[2].find(' ');
            if (sp == std::string::npos || fields[2].find(' ', sp + 1) != std::string::npos)
                fail("FOLLOWS pattern must be two space-separated tokens");
            rule.follows_prev = fields[2].substr(0, sp);
            rule.pattern = fields[2].substr(sp + 1);
            if (rule.follows_prev != "*" && !is_devanagari_pattern(rule.follows_prev))
                fail("non-Devanagari pattern '" + rule.follows_prev + "'");
            if (!is_devanagari_pattern(rule.pattern))
                fail("non-Devanagari pattern '" + rule.pattern + "'");
            rule.follows_prev = rule.follows_prev == "*" ? "*" : normalize(rule.follows_prev);
            rule.pattern = normalize(rule.pattern);
        } else {
            rule.pattern = fields[2];
            if (!is_devanagari_pattern(rule.pattern))
                fail("non-Devanagari pattern '" + rule.pattern + "'");
            rule.pattern = normalize(rule.pattern);
        }

        const auto lang = lang_from_code(fields[3]);
        if (!lang) fail("unknown language tag '" + fields[3] + "'");
        rule.language = *lang;

        int priority = 0;
        const auto [ptr, ec] =
            std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), priority);
        if (ec != std::errc{} || ptr != fields[4].data() + fields[4].size() || priority < 0)
            fail("priority must be a non-negative integer, got '" + fields[4] + "'");
        rule.priority = priority;

        if (fields.size() == 6) rule.feature = fields[5];
        rules.push_back(std::move(rule));
    }
    return make_ruleset(std::move(rules), source_name);
}

RuleSet load_rules(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::Io, "read failure on " + path.string());
    return parse_rules(buf.str(), path.string());
}

void save_rules(const RuleSet& rules, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << "# id\tkind\tpattern\tlang\tpriority\n";
    for (const Rule& r : rules.rules) {
        out << r.id << '\t' << rule_kind_name(r.kind) << '\t';
        if (r.kind == RuleKind::TokenFollows) out << r.follows_prev << ' ';
        out << r.pattern << '\t' << lang_code(r.language) << '\t' << r.priority;
        if (!r.feature.empty()) out << '\t' << r.feature;
        out << '\n';
    }
    if (!out.flush()) throw Error(ErrorKind::Io, "write failure on " + path.string());
}

RuleSet default_rules() {
    static const std::string_view text =
        "# Magahi nominal particles on inflected noun forms\n"
        "mag_particle_wa\tENDS\tवा\tmag\t2\n"
        "mag_particle_iya\tENDS\tिया\tmag\t2\n"
        "mag_particle_ma\tENDS\tमा\tmag\t1\n"
        "# Magahi numeral classifier\n"
        "mag_classifier_go\tENDS\tगो\tmag\t3\n"
        "# Magahi plural marker\n"
        "mag_plural_an\tENDS\tन\tmag\t0\n"
        "# Magahi past (-l-) and future (-b-) verb marking\n"
        "mag_past_l\tENDS\tल\tmag\t1\n"
        "mag_past_lak\tENDS\tलक\tmag\t2\n"
        "mag_future_b\tENDS\tब\tmag\t1\n"
        "mag_future_bo\tENDS\tबो\tmag\t2\n"
        "# Hindi ergative marker after a noun\n"
        "hin_ergative_ne\tFOLLOWS\t* ने\thin\t3\n"
        "# Hindi future/optative verb endings\n"
        "hin_future_ga\tENDS\tगा\thin\t1\n"
        "hin_future_ge\tENDS\tगे\thin\t1\n"
        "hin_future_gi\tENDS\tगी\thin\t1\n"
        "# Hindi progressive auxiliaries\n"
        "hin_prog_raha\tCONTAINS\tरहा\thin\t2\n"
        "hin_prog_rahi\tCONTAINS\tरही\thin\t2\n"
        "hin_prog_rahe\tCONTAINS\tरहे\thin\t2\n";
    return parse_rules(text, "<default-rules>");
}

std::string_view evidence_source_name(EvidenceSource s) {
    switch (s) {
        case EvidenceSource::UnigramLex: return "unigram";
        case EvidenceSource::MultiwordLex: return "multiword";
        case EvidenceSource::SuffixRule: return "rule";
        case EvidenceSource::SuffixTable: return "suffix";
    }
    return "unigram";
}

bool rule_matches_at(const Rule& rule, std::span<const Token> tokens, std::size_t index) {
    if (index >= tokens.size()) return false;
    const Token& tok = tokens[index];
    if (!is_evidence_token(tok)) return false;

    switch (rule.kind) {
        case RuleKind::EndsWithSuffix:
            return tok.surface.ends_with(rule.pattern);
        case RuleKind::ContainsToken:
            return tok.surface == rule.pattern;
        case RuleKind::TokenFollows: {
            if (index == 0 || tok.surface != rule.pattern) return false;
            const Token& prev = tokens[index - 1];
            if (!is_evidence_token(prev)) return false;
            return rule.follows_prev == "*" || prev.surface == rule.follows_prev;
        }
    }
    return false;
}

std::vector<Evidence> apply_rules(std::span<const Token> tokens, const RuleSet& rules) {
    std::vector<Evidence> evidence;
    for (const Rule& rule : rules.rules) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (rule_matches_at(rule, tokens, i))
                evidence.push_back(Evidence{rule.language, EvidenceSource::SuffixRule,
                                            rule.weight(), rule.id + ":" + tokens[i].surface});
        }
    }
    return evidence;
}

}  // namespace hmlid
