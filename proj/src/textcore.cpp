#include "hmlid/textcore.hpp"

#include <unicode/ubrk.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>

#include <algorithm>
#include <array>

#include "hmlid/error.hpp"
#include "unicode.hpp"

namespace hmlid {

namespace {

constexpr char32_t kZwnj = 0x200C;
constexpr char32_t kZwj = 0x200D;

bool is_devanagari_block(char32_t cp) {
    return (cp >= 0x0900 && cp <= 0x097F) || (cp >= 0xA8E0 && cp <= 0xA8FF);
}

bool is_punct_or_symbol(char32_t cp) {
    if (u_ispunct(static_cast<UChar32>(cp))) return true;
    const int8_t t = u_charType(static_cast<UChar32>(cp));
    return t == U_MATH_SYMBOL || t == U_CURRENCY_SYMBOL || t == U_MODIFIER_SYMBOL ||
           t == U_OTHER_SYMBOL;
}

bool is_latin_letter(char32_t cp) {
    UErrorCode ec = U_ZERO_ERROR;
    return uscript_getScript(static_cast<UChar32>(cp), &ec) == USCRIPT_LATIN && U_SUCCESS(ec);
}

// Majority script class of a token's letters; Digit/Punctuation when it has
// none. Ties resolve Devanagari > Latin > OtherScript.
ScriptClass token_class(std::u32string_view cps) {
    std::size_t dev = 0, lat = 0, other = 0;
    bool has_digit = false;
    for (char32_t cp : cps) {
        const ScriptClass c = classify_codepoint(cp);
        if (uni::is_letter(cp)) {
            if (c == ScriptClass::Devanagari)
                ++dev;
            else if (c == ScriptClass::Latin)
                ++lat;
            else
                ++other;
        } else if (c == ScriptClass::Digit) {
            has_digit = true;
        }
    }
    if (dev + lat + other == 0) return has_digit ? ScriptClass::Digit : ScriptClass::Punctuation;
    if (dev >= lat && dev >= other) return ScriptClass::Devanagari;
    if (lat >= other) return ScriptClass::Latin;
    return ScriptClass::OtherScript;
}

bool has_letter(std::u32string_view cps) {
    return std::any_of(cps.begin(), cps.end(), [](char32_t cp) { return uni::is_letter(cp); });
}

}  // namespace

std::string_view script_class_name(ScriptClass c) {
    switch (c) {
        case ScriptClass::Devanagari: return "devanagari";
        case ScriptClass::Latin: return "latin";
        case ScriptClass::Digit: return "digit";
        case ScriptClass::Punctuation: return "punctuation";
        case ScriptClass::OtherScript: return "other_script";
    }
    return "other_script";
}

ScriptClass classify_codepoint(char32_t cp) {
    if (cp == 0x0964 || cp == 0x0965 || cp == 0x0970) return ScriptClass::Punctuation;
    if ((cp >= '0' && cp <= '9') || (cp >= 0x0966 && cp <= 0x096F)) return ScriptClass::Digit;
    if (is_devanagari_block(cp)) return ScriptClass::Devanagari;
    if (uni::is_space(cp)) return ScriptClass::Punctuation;
    if (is_punct_or_symbol(cp)) return ScriptClass::Punctuation;
    if (is_latin_letter(cp)) return ScriptClass::Latin;
    return ScriptClass::OtherScript;
}

std::string normalize(std::string_view text) {
    std::u32string cps = uni::decode_utf8(text);
    std::erase_if(cps, [](char32_t cp) { return cp == kZwj || cp == kZwnj; });
    return uni::encode_utf8(uni::nfc(cps));
}

ScriptReport detect_script(std::string_view normalized) {
    const std::u32string cps = uni::decode_utf8(normalized);
    ScriptReport report;
    std::size_t dev_letter_tokens = 0;
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && uni::is_space(cps[i])) ++i;
        if (i >= cps.size()) break;
        std::size_t j = i;
        while (j < cps.size() && !uni::is_space(cps[j])) ++j;
        const std::u32string_view chunk(cps.data() + i, j - i);
        const ScriptClass c = token_class(chunk);
        ++report.per_class_counts[c];
        if (has_letter(chunk)) {
            ++report.total_letter_tokens;
            if (c == ScriptClass::Devanagari) ++dev_letter_tokens;
        }
        i = j;
    }
    report.devanagari_fraction =
        report.total_letter_tokens == 0
            ? 0.0
            : static_cast<double>(dev_letter_tokens) /
                  static_cast<double>(report.total_letter_tokens);
    return report;
}

std::vector<Token> tokenize(std::string_view normalized) {
    const std::u32string cps = uni::decode_utf8(normalized);
    std::vector<Token> tokens;

    auto emit = [&](std::size_t begin, std::size_t end) {
        const std::u32string_view span(cps.data() + begin, end - begin);
        Token tok;
        tok.surface = uni::encode_utf8(span);
        tok.script = token_class(span);
        tok.hidden = tok.script == ScriptClass::Latin || tok.script == ScriptClass::OtherScript;
        tok.begin = begin;
        tok.end = end;
        tokens.push_back(std::move(tok));
    };

    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && uni::is_space(cps[i])) ++i;
        if (i >= cps.size()) break;
        std::size_t j = i;
        while (j < cps.size() && !uni::is_space(cps[j])) ++j;

        // Peel leading and trailing punctuation runs off the chunk.
        std::size_t p = i;
        while (p < j && classify_codepoint(cps[p]) == ScriptClass::Punctuation) ++p;
        std::size_t q = j;
        while (q > p && classify_codepoint(cps[q - 1]) == ScriptClass::Punctuation) --q;

        if (p > i) emit(i, p);
        if (q > p) emit(p, q);
        if (j > q) emit(q, j);
        i = j;
    }
    return tokens;
}

std::string detokenize(const std::vector<Token>& tokens, std::string_view original) {
    const std::string normalized = normalize(original);
    const std::u32string cps = uni::decode_utf8(normalized);

    std::string out;
    out.reserve(normalized.size());
    std::size_t cursor = 0;
    for (const Token& tok : tokens) {
        if (tok.begin < cursor || tok.begin > tok.end || tok.end > cps.size())
            throw Error(ErrorKind::Integrity, "token span out of range");
        for (std::size_t k = cursor; k < tok.begin; ++k) uni::append_utf8(out, cps[k]);
        const std::string at_span =
            uni::encode_utf8(std::u32string_view(cps.data() + tok.begin, tok.end - tok.begin));
        if (at_span != tok.surface)
            throw Error(ErrorKind::Integrity, "token surface disagrees with its span");
        out += tok.surface;
        cursor = tok.end;
    }
    for (std::size_t k = cursor; k < cps.size(); ++k) uni::append_utf8(out, cps[k]);
    return out;
}

std::vector<std::string> grapheme_split(std::string_view word) {
    if (word.empty()) throw Error(ErrorKind::Precondition, "grapheme_split: empty input");

    const std::u32string cps = uni::decode_utf8(word);
    std::vector<UChar> u16;
    u16.reserve(cps.size() + 4);
    // Map from UTF-16 index back to code point index for slicing.
    std::vector<std::size_t> cp_at;
    cp_at.reserve(cps.size() + 4);
    for (std::size_t k = 0; k < cps.size(); ++k) {
        const char32_t cp = cps[k];
        if (cp < 0x10000) {
            u16.push_back(static_cast<UChar>(cp));
            cp_at.push_back(k);
        } else {
            const char32_t v = cp - 0x10000;
            u16.push_back(static_cast<UChar>(0xD800 + (v >> 10)));
            u16.push_back(static_cast<UChar>(0xDC00 + (v & 0x3FF)));
            cp_at.push_back(k);
            cp_at.push_back(k);
        }
    }

    UErrorCode ec = U_ZERO_ERROR;
    UBreakIterator* bi = ubrk_open(UBRK_CHARACTER, "", u16.data(),
                                   static_cast<int32_t>(u16.size()), &ec);
    if (U_FAILURE(ec)) throw Error(ErrorKind::Integrity, "ICU break iterator unavailable");

    std::vector<std::string> clusters;
    int32_t prev = ubrk_first(bi);
    for (int32_t b = ubrk_next(bi); b != UBRK_DONE; b = ubrk_next(bi)) {
        const std::size_t lo = cp_at[static_cast<std::size_t>(prev)];
        const std::size_t hi =
            b < static_cast<int32_t>(u16.size()) ? cp_at[static_cast<std::size_t>(b)] : cps.size();
        clusters.push_back(uni::encode_utf8(std::u32string_view(cps.data() + lo, hi - lo)));
        prev = b;
    }
    ubrk_close(bi);
    return clusters;
}

std::size_t grapheme_count(std::string_view word) {
    if (word.empty()) return 0;
    return grapheme_split(word).size();
}

}  // namespace hmlid
