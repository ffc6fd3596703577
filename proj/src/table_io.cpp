#include "table_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <vector>

#include "hmlid/error.hpp"
#include "hmlid/textcore.hpp"

namespace hmlid::detail {

namespace {

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line_no,
                              const std::string& what) {
    throw Error(ErrorKind::Parse,
                path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::uint64_t parse_count(const std::filesystem::path& path, std::size_t line_no,
                          std::string_view field) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        parse_error(path, line_no, "expected a non-negative integer, got '" +
                                       std::string(field) + "'");
    return value;
}

// Strips one trailing \r so files round-trip across CRLF editors.
std::string_view chomp(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

}  // namespace

TsvTable load_tsv_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());

    TsvTable table;
    std::string raw;
    std::size_t line_no = 0;

    if (!std::getline(in, raw)) {
        if (in.bad()) throw Error(ErrorKind::Io, "read failure on " + path.string());
        parse_error(path, 1, "missing header line");
    }
    ++line_no;
    std::string_view header = chomp(raw);
    if (!header.starts_with("#lang=")) parse_error(path, line_no, "header must start with #lang=");
    const std::size_t tab = header.find('\t');
    if (tab == std::string_view::npos || header.substr(tab + 1, 6) != "total=")
        parse_error(path, line_no, "header must carry a total= field");
    const auto lang = lang_from_code(header.substr(6, tab - 6));
    if (!lang) parse_error(path, line_no, "unknown language tag");
    table.language = *lang;
    table.total = parse_count(path, line_no, header.substr(tab + 7));

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = chomp(raw);
        if (line.empty()) continue;
        const std::size_t sep = line.find('\t');
        std::string key;
        std::uint64_t freq = 1;  // imported word lists may omit the count
        if (sep == std::string_view::npos) {
            key = std::string(line);
        } else {
            key = std::string(line.substr(0, sep));
            const std::string_view rest = line.substr(sep + 1);
            if (rest.find('\t') != std::string_view::npos)
                parse_error(path, line_no, "too many fields");
            freq = parse_count(path, line_no, rest);
        }
        if (key.empty()) parse_error(path, line_no, "empty key");
        if (freq == 0) parse_error(path, line_no, "zero frequency entry");
        key = normalize(key);
        if (!table.entries.emplace(std::move(key), freq).second)
            throw Error(ErrorKind::Integrity, path.string() + ":" + std::to_string(line_no) +
                                                  ": duplicate key");
    }
    if (in.bad()) throw Error(ErrorKind::Io, "read failure on " + path.string());
    return table;
}

void save_tsv_table(const std::filesystem::path& path, Lang language, std::uint64_t total,
                    const std::unordered_map<std::string, std::uint64_t>& entries) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());

    out << "#lang=" << lang_code(language) << "\ttotal=" << total << "\n";

    std::vector<const std::pair<const std::string, std::uint64_t>*> rows;
    rows.reserve(entries.size());
    for (const auto& kv : entries) rows.push_back(&kv);
    std::sort(rows.begin(), rows.end(),
              [](const auto* a, const auto* b) { return a->first < b->first; });
    for (const auto* kv : rows) out << kv->first << '\t' << kv->second << "\n";

    if (!out.flush()) throw Error(ErrorKind::Io, "write failure on " + path.string());
}

}  // namespace hmlid::detail
