#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cotx/automata.hpp"

namespace cotx {

enum class Model { Ssb, Rb, Db };

// One machine type for all three restrictions. For Db, step_dists[i] is the
// distance from state i to state i+1, and the last entry is the wrap distance
// from the last state back to the first.
struct BoundedNfa {
    Model model = Model::Ssb;
    Nfa base;
    std::size_t c = 1;
    std::vector<std::size_t> step_dists;
};

BoundedNfa make_ssb(Nfa base, std::size_t c);
BoundedNfa make_rb(Nfa base, std::size_t c);
BoundedNfa make_db(Nfa base, std::size_t c, std::vector<std::size_t> step_dists);

bool ssb_accepts(const Nfa& A, std::size_t c, const Word& w);
bool rb_accepts(const Nfa& A, std::size_t c, const Word& w);
bool db_accepts(const Nfa& A, std::size_t c, const std::vector<std::size_t>& step_dists,
                const Word& w);
bool bounded_accepts(const BoundedNfa& M, const Word& w);

// Distance between states i and j (0-based) under the forward-sum and wrap
// rules; i == j yields the full cycle length.
std::size_t db_distance(const std::vector<std::size_t>& step_dists, std::size_t i, std::size_t j);

// Number of descents in the lexicographically smallest accepting run, or
// nullopt when w is not in the base language.
std::optional<std::size_t> rb_descents(const Nfa& A, const Word& w);

// SSB: the whole finite language. RB: max_len optional only when the base
// language is finite. DB: max_len is mandatory.
std::set<Word> bounded_language(const BoundedNfa& M, std::optional<std::size_t> max_len = {});

enum class Metric { States, Transitions };

struct MinimizeResult {
    std::optional<BoundedNfa> machine;
    std::size_t size = 0;       // metric value of the machine found
    std::size_t explored = 0;   // search nodes visited
};

// Smallest machine (by metric, up to cap) whose bounded language equals L.
MinimizeResult minimize_exact(const std::set<Word>& L, const Alphabet& alphabet, Model model,
                              std::size_t c, Metric metric, std::size_t cap);

struct BipartiteGraph {
    std::vector<std::string> left;
    std::vector<std::string> right;
    std::set<std::pair<std::size_t, std::size_t>> edges;
};

struct ReducedInstance {
    Alphabet alphabet;
    std::set<Word> language;
    std::size_t k_prime = 0;
    std::size_t c = 1;
};

ReducedInstance reduce_biclique_to_ssbmin(const BipartiteGraph& G, std::size_t k, bool binary = true);

std::optional<std::size_t> biclique_cover_number(const BipartiteGraph& G, std::size_t cap);

enum class Problem1Variant { Exact, Cover };

struct Problem1Result {
    bool holds = false;
    std::vector<Word> missing;   // targets not accepted
    std::optional<Word> extra;   // shortest accepted non-target containing a forbidden factor
};

Problem1Result check_problem1(const Nfa& M, const std::set<Word>& targets,
                              const std::set<Word>& forbidden, Problem1Variant variant);

BipartiteGraph parse_graph(std::string_view text);
std::string serialize_graph(const BipartiteGraph& G);

BoundedNfa parse_bounded(std::string_view text);
std::string serialize_bounded(const BoundedNfa& M);

// One word per line, "<eps>" for the empty word; an optional "alphabet:" line
// fixes the symbols, otherwise they are the distinct characters seen.
std::pair<Alphabet, std::set<Word>> parse_word_list(std::string_view text);
std::string serialize_word_list(const Alphabet& alphabet, const std::set<Word>& words);

}  // namespace cotx
