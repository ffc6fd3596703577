#pragma once

#include <optional>
#include <string_view>

namespace hmlid {

enum class Lang { Hindi, Magahi };

constexpr std::string_view lang_code(Lang l) {
    return l == Lang::Hindi ? "hin" : "mag";
}

std::optional<Lang> lang_from_code(std::string_view code);

}  // namespace hmlid
