#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cotx/errors.hpp"

namespace cotx {

// Symbols are indices into an Alphabet. A Word is a u16string of indices, so
// std::string machinery (find, substr, hashing, ordering) works directly and
// lexicographic order follows the alphabet's declaration order.
using Symbol = char16_t;
using Word = std::u16string;

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    static Alphabet rna();  // A U C G

    std::size_t size() const { return names_.size(); }
    const std::string& name(Symbol s) const;
    std::optional<Symbol> find(std::string_view name) const;
    Symbol at(std::string_view name) const;  // throws DomainError
    bool contains(std::string_view name) const { return find(name).has_value(); }
    const std::vector<std::string>& names() const { return names_; }

    // True when every symbol is one character; words then print without
    // separators.
    bool single_char() const { return single_char_; }

    // Text form of a word: plain concatenation for single-character alphabets,
    // otherwise symbols joined by '.'. The empty word prints as "".
    std::string format(const Word& w) const;
    Word parse(std::string_view text) const;  // throws DomainError

    bool operator==(const Alphabet& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Symbol> index_;
    bool single_char_ = true;
};

// Antimorphic involution: a symbol map applied to words in reverse.
class Involution {
public:
    Involution() = default;
    // pairs lists (a, b) with theta(a) = b and theta(b) = a; unlisted symbols
    // are fixed points.
    Involution(const Alphabet& alphabet,
               const std::vector<std::pair<std::string, std::string>>& pairs);
    explicit Involution(std::vector<Symbol> mapping);

    static Involution watson_crick(const Alphabet& alphabet);

    Symbol operator()(Symbol s) const;
    const std::vector<Symbol>& mapping() const { return map_; }
    bool operator==(const Involution& o) const { return map_ == o.map_; }

private:
    std::vector<Symbol> map_;
};

Word apply_involution(const Involution& theta, const Word& w);

struct CircularWord {
    Word period;
};

std::vector<std::size_t> occurrences(const Word& pattern, const Word& text);

Word unroll(const CircularWord& cw, std::size_t k);

// Re-expresses w (over `from`) over `to` by symbol name.
Word translate(const Word& w, const Alphabet& from, const Alphabet& to);

Word repeat(const Word& w, std::size_t k);

}  // namespace cotx
