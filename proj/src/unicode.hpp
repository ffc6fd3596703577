#pragma once

// Internal UTF-8/ICU helpers shared by the library implementation. Not part
// of the public API.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hmlid::uni {

/// Strict UTF-8 decode. Rejects overlong forms, surrogates, values past
/// U+10FFFF and truncated sequences; throws ErrorKind::Decode with the byte
/// offset of the offending byte.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

/// NFC via ICU. Input and output are code point sequences.
std::u32string nfc(const std::u32string& cps);

bool is_space(char32_t cp);
bool is_letter(char32_t cp);

}  // namespace hmlid::uni
