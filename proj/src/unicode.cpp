#include "unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include "hmlid/error.hpp"

namespace hmlid::uni {

namespace {

[[noreturn]] void decode_error(std::size_t byte_offset) {
    throw Error(ErrorKind::Decode,
                "invalid UTF-8 at byte offset " + std::to_string(byte_offset));
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(text[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        char32_t min = 0;
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
            min = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
            min = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
            min = 0x10000;
        } else {
            decode_error(i);
        }
        if (i + len > n) decode_error(i);
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char bk = static_cast<unsigned char>(text[i + k]);
            if ((bk & 0xC0) != 0x80) decode_error(i + k);
            cp = (cp << 6) | (bk & 0x3F);
        }
        if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) decode_error(i);
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size() * 3);
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

std::u32string nfc(const std::u32string& cps) {
    if (cps.empty()) return {};

    std::vector<UChar> u16;
    u16.reserve(cps.size() + 8);
    for (char32_t cp : cps) {
        if (cp < 0x10000) {
            u16.push_back(static_cast<UChar>(cp));
        } else {
            const char32_t v = cp - 0x10000;
            u16.push_back(static_cast<UChar>(0xD800 + (v >> 10)));
            u16.push_back(static_cast<UChar>(0xDC00 + (v & 0x3FF)));
        }
    }

    UErrorCode ec = U_ZERO_ERROR;
    const UNormalizer2* norm = unorm2_getNFCInstance(&ec);
    if (U_FAILURE(ec)) throw Error(ErrorKind::Integrity, "ICU NFC instance unavailable");

    std::vector<UChar> dst(u16.size() + 16);
    int32_t len = unorm2_normalize(norm, u16.data(), static_cast<int32_t>(u16.size()),
                                   dst.data(), static_cast<int32_t>(dst.size()), &ec);
    if (ec == U_BUFFER_OVERFLOW_ERROR) {
        ec = U_ZERO_ERROR;
        dst.resize(static_cast<std::size_t>(len) + 1);
        len = unorm2_normalize(norm, u16.data(), static_cast<int32_t>(u16.size()),
                               dst.data(), static_cast<int32_t>(dst.size()), &ec);
    }
    if (U_FAILURE(ec)) throw Error(ErrorKind::Integrity, "ICU normalization failed");

    std::u32string out;
    out.reserve(static_cast<std::size_t>(len));
    for (int32_t i = 0; i < len;) {
        UChar32 c;
        U16_NEXT(dst.data(), i, len, c);
        out.push_back(static_cast<char32_t>(c));
    }
    return out;
}

bool is_space(char32_t cp) {
    return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool is_letter(char32_t cp) {
    return u_isalpha(static_cast<UChar32>(cp)) != 0;
}

}  // namespace hmlid::uni
