#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cotx/words.hpp"

namespace cotx {

struct Transition {
    std::size_t from;
    Symbol symbol;
    std::size_t to;
    auto operator<=>(const Transition&) const = default;
};

// States are indices 0..n-1; their declaration order is the state order.
class Nfa {
public:
    Nfa() = default;
    Nfa(Alphabet alphabet, std::vector<std::string> states, std::size_t initial,
        std::set<std::size_t> finals, std::set<Transition> transitions);

    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<std::string>& states() const { return states_; }
    std::size_t num_states() const { return states_.size(); }
    std::size_t initial() const { return initial_; }
    const std::set<std::size_t>& finals() const { return finals_; }
    bool is_final(std::size_t q) const { return finals_.count(q) > 0; }
    const std::set<Transition>& transitions() const { return transitions_; }
    // Outgoing transitions of q in (symbol, target) order.
    const std::vector<Transition>& out(std::size_t q) const { return out_[q]; }
    std::size_t state_index(std::string_view name) const;  // throws UsageError

private:
    Alphabet alphabet_;
    std::vector<std::string> states_;
    std::size_t initial_ = 0;
    std::set<std::size_t> finals_;
    std::set<Transition> transitions_;
    std::vector<std::vector<Transition>> out_;
};

bool accepts(const Nfa& A, const Word& w);

// L(A) restricted to words of length <= max_len.
std::set<Word> enumerate_language(const Nfa& A, std::size_t max_len);

// States reachable from the initial state that can also reach a final state.
std::vector<bool> useful_states(const Nfa& A);

// Removes states that cannot reach a final state (and unreachable ones). The
// initial state is always kept.
Nfa trim(const Nfa& A);

bool is_finite_language(const Nfa& A);

// Line format: alphabet:/states:/initial:/final:/trans: with '#' comments.
Nfa parse_nfa(std::string_view text);
std::string serialize_nfa(const Nfa& A);

}  // namespace cotx
