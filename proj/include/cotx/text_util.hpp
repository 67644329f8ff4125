#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cotx {

struct KeyLine {
    std::size_t number = 0;  // 1-based
    std::string key;         // text before ':' (empty for blank lines)
    std::vector<std::string> fields;
    std::string raw;  // line without comment, trimmed
};

std::vector<std::string> split_ws(std::string_view s);
std::string trim(std::string_view s);

// Splits "key: a b c" lines, dropping '#' comments and blank lines keep an
// empty key. Lines without ':' throw ParseError.
std::vector<KeyLine> split_lines(std::string_view text);

std::string read_file(const std::string& path);  // throws UsageError
void write_file(const std::string& path, const std::string& content);

}  // namespace cotx
