#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hmlid/lang.hpp"
#include "hmlid/textcore.hpp"

namespace hmlid {

/// Per-language unigram frequency table. Keys are normalized Devanagari
/// word tokens; total_tokens counts every non-punctuation token seen while
/// building, so the sum of frequencies is <= total_tokens with equality when
/// the corpus is pure Devanagari.
struct UnigramLexicon {
    Lang language = Lang::Hindi;
    std::unordered_map<std::string, std::uint64_t> entries;
    std::uint64_t total_tokens = 0;

    bool operator==(const UnigramLexicon&) const = default;
};

/// Multiword (bigram/trigram) dictionary. Keys are space-joined token
/// sequences of length 2 or 3; total counts the windows seen while building.
struct NgramDictionary {
    Lang language = Lang::Hindi;
    std::unordered_map<std::string, std::uint64_t> entries;
    std::uint64_t total = 0;

    bool operator==(const NgramDictionary&) const = default;
};

enum class MatchSource { Unigram, Bigram, Trigram };

struct MatchResult {
    std::size_t matched_length = 0;  // 0 = no match
    std::uint64_t frequency = 0;
    MatchSource source = MatchSource::Unigram;
};

/// Streaming builders so corpora never have to fit in memory.
class UnigramLexiconBuilder {
public:
    explicit UnigramLexiconBuilder(Lang language) : lexicon_{language, {}, 0} {}

    void add_line(std::string_view line);
    void add_tokens(std::span<const Token> tokens);
    UnigramLexicon build() { return std::move(lexicon_); }

private:
    UnigramLexicon lexicon_;
};

class NgramDictionaryBuilder {
public:
    /// max_n must be 2 or 3; anything else throws ErrorKind::Config.
    explicit NgramDictionaryBuilder(Lang language, int max_n = 3);

    void add_line(std::string_view line);
    void add_tokens(std::span<const Token> tokens);
    NgramDictionary build() { return std::move(dict_); }

private:
    NgramDictionary dict_;
    int max_n_;
};

UnigramLexicon build_unigram_lexicon(std::span<const std::string> corpus, Lang language);
NgramDictionary build_ngram_dictionary(std::span<const std::string> corpus, Lang language,
                                       int max_n = 3);

MatchResult lookup_unigram(const UnigramLexicon& lexicon, std::string_view word);

/// Longest contiguous dictionary match starting at start_index (trigram
/// before bigram). Windows containing punctuation, digit or hidden tokens
/// never match. Throws ErrorKind::Precondition if start_index is out of
/// range.
MatchResult match_multiword(const NgramDictionary& dict, std::span<const Token> tokens,
                            std::size_t start_index);

/// TSV model files. Line 1: `#lang=<hin|mag>\ttotal=<N>`; data lines
/// `<key>\t<frequency>`. A data line without the frequency column is read
/// with frequency 1 so externally produced word lists can be imported as-is.
void save_lexicon(const UnigramLexicon& lexicon, const std::filesystem::path& path);
UnigramLexicon load_lexicon(const std::filesystem::path& path);
void save_ngram_dictionary(const NgramDictionary& dict, const std::filesystem::path& path);
NgramDictionary load_ngram_dictionary(const std::filesystem::path& path);

std::string join_ngram(std::span<const Token> tokens, std::size_t begin, std::size_t len);

}  // namespace hmlid
