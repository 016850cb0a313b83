#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace susbam::csv {

struct Row {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 style: comma separated, fields optionally double-quoted, "" is an
/// escaped quote, quoted fields may span lines. Blank lines are skipped and a
/// UTF-8 byte-order mark is ignored. Unterminated quotes throw ParseError.
std::vector<Row> parse(std::string_view text);
std::vector<Row> read_file(const std::filesystem::path& path);

/// Quotes the field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace susbam::csv
