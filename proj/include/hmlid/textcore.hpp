#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hmlid {

enum class ScriptClass {
    Devanagari,
    Latin,
    Digit,
    Punctuation,
    OtherScript,
};

std::string_view script_class_name(ScriptClass c);

/// Classifies a single code point. Total: every code point maps to exactly
/// one class. Devanagari covers U+0900..U+097F plus U+A8E0..U+A8FF, with the
/// dandas (U+0964/U+0965) classified as Punctuation and the block digits
/// (U+0966..U+096F) as Digit. Whitespace counts as Punctuation.
ScriptClass classify_codepoint(char32_t cp);

struct Token {
    std::string surface;
    ScriptClass script = ScriptClass::OtherScript;
    bool hidden = false;
    // Code-point offsets into the normalized source line.
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const Token&) const = default;
};

struct ScriptReport {
    std::size_t total_letter_tokens = 0;
    double devanagari_fraction = 0.0;
    std::map<ScriptClass, std::size_t> per_class_counts;
};

/// Canonical composition (NFC) with ZWJ/ZWNJ removed. Throws ErrorKind::Decode
/// naming the byte offset on malformed UTF-8.
std::string normalize(std::string_view text);

/// Counts whitespace-separated tokens by the majority script class of their
/// letters. devanagari_fraction is over letter-bearing tokens only and is 0
/// when there are none.
ScriptReport detect_script(std::string_view normalized);

/// Splits normalized text on whitespace; leading/trailing punctuation runs
/// become their own Punctuation tokens. Tokens whose majority letter class is
/// neither Devanagari nor empty are marked hidden.
std::vector<Token> tokenize(std::string_view normalized);

/// Reconstructs normalize(original) from the token spans. Throws
/// ErrorKind::Integrity if spans are out of range or disagree with the
/// token surfaces.
std::string detokenize(const std::vector<Token>& tokens, std::string_view original);

/// Extended grapheme clusters of a normalized, non-empty word, in order.
/// Concatenation equals the input. Throws ErrorKind::Precondition on empty
/// input.
std::vector<std::string> grapheme_split(std::string_view word);

/// Number of grapheme clusters in a word (0 for empty input).
std::size_t grapheme_count(std::string_view word);

/// True for tokens that may carry language evidence (Devanagari words).
/// Punctuation, digits and hidden tokens never do.
inline bool is_evidence_token(const Token& tok) {
    return tok.script == ScriptClass::Devanagari;
}

}  // namespace hmlid
