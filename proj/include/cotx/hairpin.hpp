#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cotx/words.hpp"

namespace cotx {

struct Context {
    Word left;
    Word right;
    bool operator==(const Context&) const = default;
};

struct DeletionParams {
    Alphabet alphabet;
    Involution theta;
    unsigned c = 1;
    std::vector<Context> contexts;
    std::size_t margin = 0;
    std::vector<Word> terminators;  // empty for non-circular use
    std::size_t stem_len = 0;       // m; required when terminators is nonempty
    std::size_t min_loop = 0;

    void validate() const;  // throws UsageError
};

// stem >= c * log2(loop), evaluated exactly as 2^stem >= loop^c.
bool log_hairpin_ok(std::size_t stem_len, std::size_t loop_len, unsigned c);

// w = w_p alpha x loop theta(x)theta(alpha) z beta w_s, stored as offsets.
struct HairpinOccurrence {
    std::size_t start = 0;    // |w_p|
    std::size_t context = 0;  // index into DeletionParams::contexts
    std::size_t alpha_len = 0;
    std::size_t x_len = 0;
    std::size_t loop_len = 0;
    std::size_t z_len = 0;
    std::size_t beta_len = 0;

    std::size_t stem_len() const { return alpha_len + x_len; }
    std::size_t loop_start() const { return start + alpha_len + x_len; }
    std::size_t theta_start() const { return loop_start() + loop_len; }
    std::size_t z_start() const { return theta_start() + x_len + alpha_len; }
    std::size_t beta_start() const { return z_start() + z_len; }
    std::size_t end() const { return beta_start() + beta_len; }

    auto operator<=>(const HairpinOccurrence&) const = default;
};

struct Termination {
    std::size_t terminator = 0;  // index into DeletionParams::terminators
    std::size_t offset = 0;      // where t starts in the unrolled text
    Word stem;                   // removed suffix s = x theta(x)
};

struct DeletionTrace {
    Word input;  // the finite word, or the unrolled prefix w' before t
    std::size_t period_len = 0;  // nonzero for circular traces
    std::vector<HairpinOccurrence> steps;  // disjoint, ascending offsets in input
    Word output;
    std::optional<Termination> termination;
};

// Removes every step's factor from the input; for circular traces also checks
// and strips the terminating stem. Returns nullopt if the trace is inconsistent.
std::optional<Word> replay(const DeletionTrace& trace, const DeletionParams& S);

// Indexes one text for repeated hairpin queries.
class HairpinScanner {
public:
    HairpinScanner(const Word& text, const DeletionParams& S);

    const Word& text() const { return text_; }

    // All occurrences whose alpha starts at q and whose beta ends by `limit`.
    void occurrences_at(std::size_t q, std::size_t limit,
                        std::vector<HairpinOccurrence>& out) const;

    // One witness per distinct end r such that text[q, r) deletes to the empty
    // word, ends ascending.
    std::vector<HairpinOccurrence> deletable_from(std::size_t q, std::size_t limit) const;

    // Smallest end of a left context starting at s (npos if none).
    std::size_t left_end(std::size_t s) const { return left_end_[s]; }

private:
    const Word& text_;
    const DeletionParams& S_;
    std::vector<Word> theta_left_;
    std::vector<std::vector<char>> left_at_;
    std::vector<std::vector<char>> theta_at_;
    std::vector<std::vector<std::size_t>> beta_pos_;
    std::vector<std::size_t> left_end_;
};

std::vector<HairpinOccurrence> find_hairpin_occurrences(const Word& w, const DeletionParams& S);
bool any_hairpin(const Word& w, const DeletionParams& S);

std::set<Word> delete_step(const Word& w, const DeletionParams& S);
std::map<Word, DeletionTrace> delete_step_traced(const Word& w, const DeletionParams& S);

bool deletable_to_empty(const Word& w, const DeletionParams& S);

std::set<Word> parallel_delete(const Word& w, const DeletionParams& S, bool maximal);
std::map<Word, DeletionTrace> parallel_delete_traced(const Word& w, const DeletionParams& S,
                                                     bool maximal);

struct CircularResult {
    std::map<Word, DeletionTrace> words;  // one witness trace per output
    bool saturated = false;  // some witness terminates inside the last unrolled period
    std::string note;
};

CircularResult circular_terminating_delete(const CircularWord& cw, const DeletionParams& S,
                                           std::size_t length_bound, std::size_t period_bound);

inline std::size_t default_period_bound(std::size_t length_bound) { return length_bound + 3; }

}  // namespace cotx
