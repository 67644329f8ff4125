#include "cotx/text_util.hpp"

#include <fstream>
#include <sstream>

#include "cotx/errors.hpp"

namespace cotx {

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

std::string trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::vector<KeyLine> split_lines(std::string_view text) {
    std::vector<KeyLine> out;
    std::size_t number = 0, pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        ++number;
        auto hash = line.find('#');
        KeyLine kl;
        kl.number = number;
        kl.raw = trim(line.substr(0, hash));
        if (!kl.raw.empty()) {
            auto colon = kl.raw.find(':');
            if (colon == std::string::npos)
                throw ParseError(number, 1, "expected 'key: value'");
            kl.key = trim(std::string_view(kl.raw).substr(0, colon));
            kl.fields = split_ws(std::string_view(kl.raw).substr(colon + 1));
        }
        out.push_back(std::move(kl));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << content;
}

}  // namespace cotx
