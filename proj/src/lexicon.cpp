#include "hmlid/lexicon.hpp"

#include <algorithm>

#include "hmlid/error.hpp"
#include "table_io.hpp"

namespace hmlid {

std::optional<Lang> lang_from_code(std::string_view code) {
    if (code == "hin") return Lang::Hindi;
    if (code == "mag") return Lang::Magahi;
    return std::nullopt;
}

void UnigramLexiconBuilder::add_line(std::string_view line) {
    add_tokens(tokenize(normalize(line)));
}

void UnigramLexiconBuilder::add_tokens(std::span<const Token> tokens) {
    for (const Token& tok : tokens) {
        if (tok.script == ScriptClass::Punctuation) continue;
        ++lexicon_.total_tokens;
        if (is_evidence_token(tok)) ++lexicon_.entries[tok.surface];
    }
}

NgramDictionaryBuilder::NgramDictionaryBuilder(Lang language, int max_n)
    : dict_{language, {}, 0}, max_n_(max_n) {
    if (max_n != 2 && max_n != 3)
        throw Error(ErrorKind::Config, "max_n must be 2 or 3, got " + std::to_string(max_n));
}

void NgramDictionaryBuilder::add_line(std::string_view line) {
    add_tokens(tokenize(normalize(line)));
}

void NgramDictionaryBuilder::add_tokens(std::span<const Token> tokens) {
    // Windows are contiguous within a line and never include punctuation,
    // digit or hidden tokens.
    for (std::size_t n = 2; n <= static_cast<std::size_t>(max_n_); ++n) {
        if (tokens.size() < n) continue;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            bool clean = true;
            for (std::size_t k = i; k < i + n; ++k) {
                if (!is_evidence_token(tokens[k])) {
                    clean = false;
                    break;
                }
            }
            if (!clean) continue;
            ++dict_.entries[join_ngram(tokens, i, n)];
            ++dict_.total;
        }
    }
}

std::string join_ngram(std::span<const Token> tokens, std::size_t begin, std::size_t len) {
    std::string key;
    for (std::size_t k = begin; k < begin + len; ++k) {
        if (k > begin) key += ' ';
        key += tokens[k].surface;
    }
    return key;
}

UnigramLexicon build_unigram_lexicon(std::span<const std::string> corpus, Lang language) {
    UnigramLexiconBuilder builder(language);
    for (const std::string& line : corpus) builder.add_line(line);
    return builder.build();
}

NgramDictionary build_ngram_dictionary(std::span<const std::string> corpus, Lang language,
                                       int max_n) {
    NgramDictionaryBuilder builder(language, max_n);
    for (const std::string& line : corpus) builder.add_line(line);
    return builder.build();
}

MatchResult lookup_unigram(const UnigramLexicon& lexicon, std::string_view word) {
    const auto it = lexicon.entries.find(std::string(word));
    if (it == lexicon.entries.end()) return {};
    return {1, it->second, MatchSource::Unigram};
}

MatchResult match_multiword(const NgramDictionary& dict, std::span<const Token> tokens,
                            std::size_t start_index) {
    if (start_index >= tokens.size())
        throw Error(ErrorKind::Precondition, "match_multiword: start index out of range");

    for (std::size_t n = 3; n >= 2; --n) {
        if (start_index + n > tokens.size()) continue;
        bool clean = true;
        for (std::size_t k = start_index; k < start_index + n; ++k) {
            if (!is_evidence_token(tokens[k])) {
                clean = false;
                break;
            }
        }
        if (!clean) continue;
        const auto it = dict.entries.find(join_ngram(tokens, start_index, n));
        if (it != dict.entries.end())
            return {n, it->second, n == 3 ? MatchSource::Trigram : MatchSource::Bigram};
    }
    return {};
}

void save_lexicon(const UnigramLexicon& lexicon, const std::filesystem::path& path) {
    detail::save_tsv_table(path, lexicon.language, lexicon.total_tokens, lexicon.entries);
}

UnigramLexicon load_lexicon(const std::filesystem::path& path) {
    detail::TsvTable t = detail::load_tsv_table(path);
    return {t.language, std::move(t.entries), t.total};
}

void save_ngram_dictionary(const NgramDictionary& dict, const std::filesystem::path& path) {
    detail::save_tsv_table(path, dict.language, dict.total, dict.entries);
}

NgramDictionary load_ngram_dictionary(const std::filesystem::path& path) {
    detail::TsvTable t = detail::load_tsv_table(path);
    NgramDictionary dict{t.language, std::move(t.entries), t.total};
    for (const auto& [key, freq] : dict.entries) {
        const std::size_t spaces =
            static_cast<std::size_t>(std::count(key.begin(), key.end(), ' '));
        if (spaces < 1 || spaces > 2)
            throw Error(ErrorKind::Parse,
                        path.string() + ": ngram key '" + key + "' must have 2 or 3 tokens");
    }
    return dict;
}

}  // namespace hmlid
