#pragma once

// Internal loader/saver for the TSV frequency-table files shared by the
// lexicon and suffix modules.

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>

#include "hmlid/lang.hpp"

namespace hmlid::detail {

struct TsvTable {
    Lang language = Lang::Hindi;
    std::uint64_t total = 0;
    std::unordered_map<std::string, std::uint64_t> entries;
};

TsvTable load_tsv_table(const std::filesystem::path& path);

void save_tsv_table(const std::filesystem::path& path, Lang language, std::uint64_t total,
                    const std::unordered_map<std::string, std::uint64_t>& entries);

}  // namespace hmlid::detail
