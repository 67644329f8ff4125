#include "cotx/words.hpp"

#include <algorithm>
#include <limits>

namespace cotx {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw UsageError("alphabet must be nonempty");
    if (names_.size() >= std::numeric_limits<Symbol>::max())
        throw UsageError("alphabet too large");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        const auto& n = names_[i];
        if (n.empty()) throw UsageError("empty symbol name");
        for (char ch : n) {
            if (ch == '.' || ch == '<' || ch == '#' || ch == ',' ||
                static_cast<unsigned char>(ch) <= ' ')
                throw UsageError("symbol '" + n + "' contains a reserved character");
        }
        if (!index_.emplace(n, static_cast<Symbol>(i)).second)
            throw UsageError("duplicate symbol '" + n + "'");
        if (n.size() != 1) single_char_ = false;
    }
}

Alphabet Alphabet::rna() { return Alphabet({"A", "U", "C", "G"}); }

const std::string& Alphabet::name(Symbol s) const {
    if (s >= names_.size()) throw DomainError("symbol index out of range");
    return names_[s];
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Symbol Alphabet::at(std::string_view name) const {
    auto s = find(name);
    if (!s) throw DomainError("symbol '" + std::string(name) + "' not in alphabet");
    return *s;
}

std::string Alphabet::format(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!single_char_ && i) out += '.';
        out += name(w[i]);
    }
    return out;
}

Word Alphabet::parse(std::string_view text) const {
    Word w;
    if (text.empty()) return w;
    if (single_char_) {
        for (char ch : text) w.push_back(at(std::string_view(&ch, 1)));
        return w;
    }
    std::size_t pos = 0;
    while (true) {
        auto dot = text.find('.', pos);
        w.push_back(at(text.substr(pos, dot == std::string_view::npos ? dot : dot - pos)));
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return w;
}

Involution::Involution(const Alphabet& alphabet,
                       const std::vector<std::pair<std::string, std::string>>& pairs) {
    map_.resize(alphabet.size());
    for (std::size_t i = 0; i < map_.size(); ++i) map_[i] = static_cast<Symbol>(i);
    std::vector<bool> seen(alphabet.size(), false);
    for (const auto& [a, b] : pairs) {
        Symbol x = alphabet.at(a), y = alphabet.at(b);
        if (seen[x] || seen[y])
            throw UsageError("involution pairs '" + a + "' or '" + b + "' twice");
        seen[x] = seen[y] = true;
        map_[x] = y;
        map_[y] = x;
    }
}

Involution::Involution(std::vector<Symbol> mapping) : map_(std::move(mapping)) {
    for (std::size_t i = 0; i < map_.size(); ++i) {
        if (map_[i] >= map_.size() || map_[map_[i]] != i)
            throw UsageError("mapping is not an involution");
    }
}

Involution Involution::watson_crick(const Alphabet& alphabet) {
    std::vector<std::pair<std::string, std::string>> pairs;
    if (alphabet.contains("A") && alphabet.contains("U")) pairs.emplace_back("A", "U");
    if (alphabet.contains("A") && alphabet.contains("T")) pairs.emplace_back("A", "T");
    if (alphabet.contains("C") && alphabet.contains("G")) pairs.emplace_back("C", "G");
    return Involution(alphabet, pairs);
}

Symbol Involution::operator()(Symbol s) const {
    if (s >= map_.size()) throw DomainError("symbol outside the involution's alphabet");
    return map_[s];
}

Word apply_involution(const Involution& theta, const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& s : out) s = theta(s);
    return out;
}

std::vector<std::size_t> occurrences(const Word& pattern, const Word& text) {
    if (pattern.empty()) throw UsageError("occurrences: empty pattern");
    std::vector<std::size_t> out;
    for (auto pos = text.find(pattern); pos != Word::npos; pos = text.find(pattern, pos + 1))
        out.push_back(pos);
    return out;
}

Word repeat(const Word& w, std::size_t k) {
    Word out;
    out.reserve(w.size() * k);
    for (std::size_t i = 0; i < k; ++i) out += w;
    return out;
}

Word unroll(const CircularWord& cw, std::size_t k) {
    if (k == 0) throw UsageError("unroll: count must be at least 1");
    if (cw.period.empty()) throw UsageError("unroll: empty period");
    return repeat(cw.period, k);
}

Word translate(const Word& w, const Alphabet& from, const Alphabet& to) {
    Word out;
    out.reserve(w.size());
    for (Symbol s : w) out.push_back(to.at(from.name(s)));
    return out;
}

}  // namespace cotx
