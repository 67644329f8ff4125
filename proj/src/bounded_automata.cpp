#include "cotx/bounded_automata.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "cotx/text_util.hpp"

namespace cotx {

namespace {

bool shortlex_less(const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
}

std::string model_name(Model m) {
    switch (m) {
        case Model::Ssb: return "ssb";
        case Model::Rb: return "rb";
        case Model::Db: return "db";
    }
    return "?";
}

// Prefix tree over a finite word set; node 0 is the root, -1 means "left the
// tree".
class Trie {
public:
    Trie(const std::set<Word>& words, std::size_t sigma) : sigma_(sigma) {
        add_node();
        for (const auto& w : words) {
            int node = 0;
            for (Symbol a : w) {
                if (child_[node * sigma_ + a] < 0) {
                    int fresh = add_node();
                    child_[node * sigma_ + a] = fresh;
                }
                node = child_[node * sigma_ + a];
            }
            terminal_[node] = true;
        }
    }
    int step(int node, Symbol a) const { return node < 0 ? -1 : child_[node * sigma_ + a]; }
    bool terminal(int node) const { return node >= 0 && terminal_[node]; }

private:
    int add_node() {
        child_.resize(child_.size() + sigma_, -1);
        terminal_.push_back(false);
        return static_cast<int>(terminal_.size()) - 1;
    }
    std::size_t sigma_;
    std::vector<int> child_;
    std::vector<char> terminal_;
};

Nfa filter_db(const Nfa& A, std::size_t c, const std::vector<std::size_t>& steps) {
    std::set<Transition> kept;
    for (const auto& t : A.transitions())
        if (db_distance(steps, t.from, t.to) <= c) kept.insert(t);
    return Nfa(A.alphabet(), A.states(), A.initial(), A.finals(), kept);
}

void ssb_collect(const Nfa& A, std::size_t c, std::size_t q, Word& w,
                 std::vector<std::size_t>& visits, std::set<Word>& out) {
    if (A.is_final(q)) out.insert(w);
    for (const auto& t : A.out(q)) {
        if (visits[t.to] >= c) continue;
        ++visits[t.to];
        w.push_back(t.symbol);
        ssb_collect(A, c, t.to, w, visits, out);
        w.pop_back();
        --visits[t.to];
    }
}

bool ssb_run(const Nfa& A, std::size_t c, const Word& w, std::size_t pos, std::size_t q,
             std::vector<std::size_t>& visits) {
    if (pos == w.size()) return A.is_final(q);
    for (const auto& t : A.out(q)) {
        if (t.symbol != w[pos] || visits[t.to] >= c) continue;
        ++visits[t.to];
        bool ok = ssb_run(A, c, w, pos + 1, t.to, visits);
        --visits[t.to];
        if (ok) return true;
    }
    return false;
}

}  // namespace

BoundedNfa make_ssb(Nfa base, std::size_t c) {
    if (c < 1) throw UsageError("ssb bound must be at least 1");
    return {Model::Ssb, std::move(base), c, {}};
}

BoundedNfa make_rb(Nfa base, std::size_t c) { return {Model::Rb, std::move(base), c, {}}; }

BoundedNfa make_db(Nfa base, std::size_t c, std::vector<std::size_t> step_dists) {
    if (c < 1) throw UsageError("db bound must be at least 1");
    if (step_dists.empty()) step_dists.assign(base.num_states(), 1);
    if (step_dists.size() != base.num_states())
        throw UsageError("db machine needs one step distance per state");
    for (auto d : step_dists)
        if (d < 1) throw UsageError("db step distances must be positive");
    return {Model::Db, std::move(base), c, std::move(step_dists)};
}

bool ssb_accepts(const Nfa& A, std::size_t c, const Word& w) {
    if (c < 1) return false;
    std::vector<std::size_t> visits(A.num_states(), 0);
    visits[A.initial()] = 1;
    return ssb_run(A, c, w, 0, A.initial(), visits);
}

std::optional<std::size_t> rb_descents(const Nfa& A, const Word& w) {
    const std::size_t n = A.num_states();
    // live[p][q]: q accepts the suffix starting at p.
    std::vector<std::vector<char>> live(w.size() + 1, std::vector<char>(n, 0));
    for (auto f : A.finals()) live[w.size()][f] = 1;
    for (std::size_t p = w.size(); p-- > 0;)
        for (std::size_t q = 0; q < n; ++q)
            for (const auto& t : A.out(q))
                if (t.symbol == w[p] && live[p + 1][t.to]) {
                    live[p][q] = 1;
                    break;
                }
    if (!live[0][A.initial()]) return std::nullopt;
    // Every run on w has |w| steps, so the shortest path is the smallest
    // state sequence; greedy choice of the smallest live successor gives it.
    std::size_t q = A.initial(), descents = 0;
    for (std::size_t p = 0; p < w.size(); ++p) {
        std::size_t best = n;
        for (const auto& t : A.out(q))
            if (t.symbol == w[p] && live[p + 1][t.to]) best = std::min(best, t.to);
        if (best < q) ++descents;
        q = best;
    }
    return descents;
}

bool rb_accepts(const Nfa& A, std::size_t c, const Word& w) {
    auto d = rb_descents(A, w);
    return d && *d <= c;
}

std::size_t db_distance(const std::vector<std::size_t>& steps, std::size_t i, std::size_t j) {
    const std::size_t n = steps.size();
    if (i >= n || j >= n) throw UsageError("db distance: state out of range");
    std::size_t d = 0;
    std::size_t k = i;
    do {
        d += steps[k];
        k = (k + 1) % n;
    } while (k != j);
    return d;
}

bool db_accepts(const Nfa& A, std::size_t c, const std::vector<std::size_t>& step_dists,
                const Word& w) {
    return accepts(filter_db(A, c, step_dists), w);
}

bool bounded_accepts(const BoundedNfa& M, const Word& w) {
    switch (M.model) {
        case Model::Ssb: return ssb_accepts(M.base, M.c, w);
        case Model::Rb: return rb_accepts(M.base, M.c, w);
        case Model::Db: return db_accepts(M.base, M.c, M.step_dists, w);
    }
    return false;
}

std::set<Word> bounded_language(const BoundedNfa& M, std::optional<std::size_t> max_len) {
    const Nfa& A = M.base;
    switch (M.model) {
        case Model::Ssb: {
            std::set<Word> out;
            std::vector<std::size_t> visits(A.num_states(), 0);
            visits[A.initial()] = 1;
            Word w;
            ssb_collect(A, M.c, A.initial(), w, visits, out);
            if (max_len)
                std::erase_if(out, [&](const Word& u) { return u.size() > *max_len; });
            return out;
        }
        case Model::Rb: {
            std::size_t limit;
            if (max_len) {
                limit = *max_len;
            } else if (is_finite_language(A)) {
                limit = A.num_states();
            } else {
                throw UsageError("rb language may be infinite; give a length bound");
            }
            std::set<Word> out;
            for (const auto& w : enumerate_language(A, limit))
                if (rb_accepts(A, M.c, w)) out.insert(w);
            return out;
        }
        case Model::Db:
            if (!max_len) throw UsageError("db language needs a length bound");
            return enumerate_language(filter_db(A, M.c, M.step_dists), *max_len);
    }
    return {};
}

// ---------------------------------------------------------------------------
// Exact minimization.
//
// Ssb and Db acceptance are monotone in the transition and final sets, so a
// minimal machine contains a submachine formed by one accepting run per word
// of L that still accepts exactly L. The search builds such unions run by run
// and prunes as soon as the partial machine accepts a word outside L. For Ssb
// new states are numbered by first use. Db distances depend on state order,
// so its state count is fixed up front (initial state first, by rotation)
// with unit step distances. Rb acceptance is not monotone; it falls back to
// enumerating every machine.

namespace {

constexpr std::size_t kMaxStates = 32;

class UnionSearch {
public:
    UnionSearch(const std::vector<Word>& words, const Trie& trie, std::size_t sigma, Model model,
                std::size_t c, std::size_t max_states, std::size_t max_trans)
        : words_(words), trie_(trie), sigma_(sigma), model_(model), c_(c),
          max_states_(max_states), max_trans_(max_trans),
          adj_(max_states * sigma, 0) {
        // With c >= |Q| every cyclic distance fits, so Db states are
        // interchangeable and grow on demand like Ssb states.
        grow_ = model == Model::Ssb || (model == Model::Db && c >= max_states);
        n_ = grow_ ? 1 : max_states;
    }

    bool run() { return solve(0); }
    std::size_t explored() const { return explored_; }
    std::size_t used_states() const { return n_; }
    std::size_t used_transitions() const { return ntrans_; }

    Nfa machine(const Alphabet& alphabet) const {
        std::vector<std::string> names;
        for (std::size_t q = 0; q < n_; ++q) names.push_back("q" + std::to_string(q));
        std::set<std::size_t> finals;
        std::set<Transition> trans;
        for (std::size_t q = 0; q < n_; ++q) {
            if (finals_ >> q & 1u) finals.insert(q);
            for (std::size_t a = 0; a < sigma_; ++a)
                for (std::size_t t = 0; t < n_; ++t)
                    if (adj_[q * sigma_ + a] >> t & 1u)
                        trans.insert({q, static_cast<Symbol>(a), t});
        }
        return Nfa(alphabet, names, 0, finals, trans);
    }

private:
    std::uint32_t& edges(std::size_t q, Symbol a) { return adj_[q * sigma_ + a]; }
    std::uint32_t edges(std::size_t q, Symbol a) const { return adj_[q * sigma_ + a]; }

    bool step_ok(std::size_t q, std::size_t t, const std::vector<std::size_t>& visits) const {
        if (model_ == Model::Ssb) return visits[t] < c_;
        std::size_t d = t > q ? t - q : t + max_states_ - q;  // unit cyclic distance
        return d <= c_;
    }

    bool solve(std::size_t wi) {
        ++explored_;
        if (wi == words_.size()) return true;
        // The outcome depends only on the partial machine and the word index.
        std::u32string key(adj_.begin(), adj_.end());
        key.push_back(finals_);
        key.push_back(static_cast<char32_t>(n_));
        key.push_back(static_cast<char32_t>(wi));
        if (failed_.count(key)) return false;
        if (place_first(wi)) return true;
        failed_.insert(std::move(key));
        return false;
    }

    bool place_first(std::size_t wi) {
        std::vector<std::size_t> visits(max_states_, 0);
        visits[0] = 1;
        return place(wi, 0, 0, visits);
    }

    bool place(std::size_t wi, std::size_t pos, std::size_t q, std::vector<std::size_t>& visits) {
        const Word& w = words_[wi];
        if (pos == w.size()) {
            bool was = finals_ >> q & 1u;
            if (!was) {
                finals_ |= 1u << q;
                if (!consistent()) {
                    finals_ &= ~(1u << q);
                    return false;
                }
            }
            if (solve(wi + 1)) return true;
            if (!was) finals_ &= ~(1u << q);
            return false;
        }
        if (model_ == Model::Ssb) {
            // Each remaining symbol costs one visit somewhere.
            std::size_t room = (max_states_ - n_) * c_;
            for (std::size_t s = 0; s < n_; ++s) room += c_ - std::min(c_, visits[s]);
            if (room < w.size() - pos) return false;
        }
        const Symbol a = w[pos];
        auto descend = [&](std::size_t t) {
            ++visits[t];
            bool ok = place(wi, pos + 1, t, visits);
            --visits[t];
            return ok;
        };
        std::uint32_t have = edges(q, a);
        for (std::size_t t = 0; t < n_; ++t)
            if ((have >> t & 1u) && step_ok(q, t, visits) && descend(t)) return true;
        if (ntrans_ >= max_trans_) return false;
        auto try_new = [&](std::size_t t) {
            edges(q, a) |= 1u << t;
            ++ntrans_;
            bool ok = consistent() && descend(t);
            if (!ok) {
                edges(q, a) &= ~(1u << t);
                --ntrans_;
            }
            return ok;
        };
        for (std::size_t t = 0; t < n_; ++t)
            if (!(have >> t & 1u) && step_ok(q, t, visits) && try_new(t)) return true;
        if (grow_ && n_ < max_states_) {
            std::size_t t = n_++;
            if (step_ok(q, t, visits) && try_new(t)) return true;
            --n_;
        }
        return false;
    }

    // Accepted language of the partial machine is a subset of L.
    bool consistent() {
        ++explored_;
        if (model_ == Model::Ssb) {
            std::vector<std::size_t> visits(n_, 0);
            visits[0] = 1;
            return ssb_subset(0, 0, visits);
        }
        // Db reduces to a plain automaton; explore (state, trie node) pairs.
        std::set<std::pair<std::size_t, int>> seen{{0, 0}};
        std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
        while (!stack.empty()) {
            auto [q, node] = stack.back();
            stack.pop_back();
            if ((finals_ >> q & 1u) && !trie_.terminal(node)) return false;
            for (std::size_t a = 0; a < sigma_; ++a) {
                std::uint32_t e = edges(q, static_cast<Symbol>(a));
                for (std::size_t t = 0; t < n_; ++t)
                    if (e >> t & 1u) {
                        std::pair<std::size_t, int> nxt{t, trie_.step(node, static_cast<Symbol>(a))};
                        if (seen.insert(nxt).second) stack.push_back(nxt);
                    }
            }
        }
        return true;
    }

    bool ssb_subset(std::size_t q, int node, std::vector<std::size_t>& visits) const {
        if ((finals_ >> q & 1u) && !trie_.terminal(node)) return false;
        for (std::size_t a = 0; a < sigma_; ++a) {
            std::uint32_t e = edges(q, static_cast<Symbol>(a));
            for (std::size_t t = 0; t < n_; ++t) {
                if (!(e >> t & 1u) || visits[t] >= c_) continue;
                ++visits[t];
                bool ok = ssb_subset(t, trie_.step(node, static_cast<Symbol>(a)), visits);
                --visits[t];
                if (!ok) return false;
            }
        }
        return true;
    }

    const std::vector<Word>& words_;
    const Trie& trie_;
    std::size_t sigma_;
    Model model_;
    std::size_t c_;
    std::size_t max_states_;
    std::size_t max_trans_;
    std::vector<std::uint32_t> adj_;
    bool grow_ = false;
    std::size_t n_ = 1;
    std::size_t ntrans_ = 0;
    std::uint32_t finals_ = 0;
    std::size_t explored_ = 0;
    std::unordered_set<std::u32string> failed_;
};

// Brute force over all machines with n states (Rb only).
std::optional<Nfa> rb_brute_force(const std::set<Word>& L, const Alphabet& alphabet,
                                  std::size_t c, std::size_t n, std::optional<std::size_t> trans,
                                  std::size_t& explored) {
    const std::size_t sigma = alphabet.size();
    const std::size_t slots = n * sigma * n;
    if (slots + n > 22) throw UsageError("rb search space too large at " + std::to_string(n) + " states");
    std::size_t max_len = 0;
    for (const auto& w : L) max_len = std::max(max_len, w.size());
    std::vector<std::string> names;
    for (std::size_t q = 0; q < n; ++q) names.push_back("q" + std::to_string(q));
    for (std::size_t init = 0; init < n; ++init)
        for (std::uint32_t fm = 0; fm < (1u << n); ++fm)
            for (std::uint64_t tm = 0; tm < (std::uint64_t{1} << slots); ++tm) {
                if (trans && static_cast<std::size_t>(std::popcount(tm)) != *trans) continue;
                ++explored;
                std::set<std::size_t> finals;
                for (std::size_t q = 0; q < n; ++q)
                    if (fm >> q & 1u) finals.insert(q);
                std::set<Transition> ts;
                for (std::size_t s = 0; s < slots; ++s)
                    if (tm >> s & 1u)
                        ts.insert({s / (sigma * n), static_cast<Symbol>(s / n % sigma), s % n});
                Nfa A(alphabet, names, init, finals, ts);
                bool ok = std::all_of(L.begin(), L.end(),
                                      [&](const Word& w) { return rb_accepts(A, c, w); });
                if (!ok) continue;
                if (bounded_language(make_rb(A, c), max_len + n) == L) return A;
            }
    return std::nullopt;
}

}  // namespace

MinimizeResult minimize_exact(const std::set<Word>& L, const Alphabet& alphabet, Model model,
                              std::size_t c, Metric metric, std::size_t cap) {
    if (c < 1 && model != Model::Rb) throw UsageError("bound must be at least 1");
    for (const auto& w : L)
        for (Symbol a : w)
            if (a >= alphabet.size()) throw DomainError("word outside the alphabet");
    MinimizeResult res;
    std::vector<Word> words(L.begin(), L.end());
    std::sort(words.begin(), words.end(), [](const Word& a, const Word& b) {
        return a.size() != b.size() ? a.size() > b.size() : a < b;
    });
    Trie trie(L, alphabet.size());
    constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

    const std::size_t first = metric == Metric::States ? 1 : 0;
    for (std::size_t k = first; k <= cap; ++k) {
        if (model == Model::Rb) {
            for (std::size_t n = (metric == Metric::States ? k : 1);
                 n <= (metric == Metric::States ? k : k + 1); ++n) {
                auto A = rb_brute_force(L, alphabet, c, n,
                                        metric == Metric::Transitions ? std::optional{k} : std::nullopt,
                                        res.explored);
                if (A) {
                    res.machine = make_rb(*A, c);
                    res.size = k;
                    return res;
                }
            }
            continue;
        }
        if (model == Model::Ssb) {
            std::size_t ms = metric == Metric::States ? k : k + 1;
            if (ms > kMaxStates) break;
            UnionSearch s(words, trie, alphabet.size(), model, c, ms,
                          metric == Metric::Transitions ? k : kNoLimit);
            bool found = s.run();
            res.explored += s.explored();
            if (found) {
                res.machine = make_ssb(s.machine(alphabet), c);
                res.size = k;
                return res;
            }
            continue;
        }
        // Db: the state count is part of the distance function, so each
        // candidate count is searched separately.
        std::size_t lo = metric == Metric::States ? k : 1;
        std::size_t hi = metric == Metric::States ? k : std::min(k + 1, kMaxStates);
        for (std::size_t n = lo; n <= hi && n <= kMaxStates; ++n) {
            UnionSearch s(words, trie, alphabet.size(), model, c, n,
                          metric == Metric::Transitions ? k : kNoLimit);
            bool found = s.run();
            res.explored += s.explored();
            if (found) {
                res.machine = make_db(s.machine(alphabet), c, std::vector<std::size_t>(s.used_states(), 1));
                res.size = k;
                return res;
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------

ReducedInstance reduce_biclique_to_ssbmin(const BipartiteGraph& G, std::size_t k, bool binary) {
    const std::size_t n = G.left.size(), m = G.right.size();
    ReducedInstance out;
    out.c = 1;
    if (binary) {
        out.alphabet = Alphabet({"0", "1"});
        for (const auto& [i, j] : G.edges) {
            Word w(i + 1, Symbol{0});
            w += Word(2, Symbol{1});
            w += Word(j + 1, Symbol{0});
            out.language.insert(w);
        }
        out.k_prime = 2 + n + m + k;
    } else {
        std::vector<std::string> names = G.left;
        names.insert(names.end(), G.right.begin(), G.right.end());
        out.alphabet = Alphabet(names);
        for (const auto& [i, j] : G.edges)
            out.language.insert(Word{static_cast<Symbol>(i), static_cast<Symbol>(n + j)});
        out.k_prime = k + 2;
    }
    return out;
}

std::optional<std::size_t> biclique_cover_number(const BipartiteGraph& G, std::size_t cap) {
    const std::size_t n = G.left.size(), m = G.right.size();
    if (n > 24 || m > 64) throw UsageError("graph too large for exhaustive cover search");
    if (G.edges.empty()) return 0;
    std::vector<std::uint64_t> nbr(n, 0);
    for (const auto& [i, j] : G.edges) nbr[i] |= std::uint64_t{1} << j;

    // Maximal bicliques suffice: any cover can be enlarged to one of them.
    std::set<std::pair<std::uint32_t, std::uint64_t>> bicliques;
    for (std::uint32_t X = 1; X < (1u << n); ++X) {
        std::uint64_t Y = ~std::uint64_t{0};
        for (std::size_t i = 0; i < n; ++i)
            if (X >> i & 1u) Y &= nbr[i];
        if (!Y) continue;
        std::uint32_t closure = 0;
        for (std::size_t i = 0; i < n; ++i)
            if ((nbr[i] & Y) == Y) closure |= 1u << i;
        bicliques.insert({closure, Y});
    }
    std::vector<std::pair<std::uint32_t, std::uint64_t>> bs(bicliques.begin(), bicliques.end());
    std::vector<std::pair<std::size_t, std::size_t>> edges(G.edges.begin(), G.edges.end());

    std::function<bool(std::vector<char>&, std::size_t)> cover = [&](std::vector<char>& covered,
                                                                     std::size_t budget) {
        auto it = std::find(covered.begin(), covered.end(), 0);
        if (it == covered.end()) return true;
        if (budget == 0) return false;
        auto [ei, ej] = edges[static_cast<std::size_t>(it - covered.begin())];
        for (const auto& [X, Y] : bs) {
            if (!(X >> ei & 1u) || !(Y >> ej & 1u)) continue;
            std::vector<char> next = covered;
            for (std::size_t e = 0; e < edges.size(); ++e)
                if ((X >> edges[e].first & 1u) && (Y >> edges[e].second & 1u)) next[e] = 1;
            if (cover(next, budget - 1)) return true;
        }
        return false;
    };
    for (std::size_t k = 1; k <= cap; ++k) {
        std::vector<char> covered(edges.size(), 0);
        if (cover(covered, k)) return k;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

Problem1Result check_problem1(const Nfa& M, const std::set<Word>& targets,
                              const std::set<Word>& forbidden, Problem1Variant variant) {
    for (const auto& f : forbidden) {
        bool factor = std::any_of(targets.begin(), targets.end(),
                                  [&](const Word& w) { return w.find(f) != Word::npos; });
        if (!factor) throw UsageError("forbidden pattern is not a factor of any target word");
    }
    Problem1Result res;
    for (const auto& w : targets)
        if (!accepts(M, w)) res.missing.push_back(w);
    std::sort(res.missing.begin(), res.missing.end(), shortlex_less);

    auto has_forbidden = [&](const Word& u) {
        return std::any_of(forbidden.begin(), forbidden.end(),
                           [&](const Word& f) { return u.find(f) != Word::npos; });
    };

    if (variant == Problem1Variant::Cover) {
        std::size_t n = 0;
        for (const auto& w : targets) n = std::max(n, w.size());
        std::vector<Word> extras;
        for (const auto& u : enumerate_language(M, n))
            if (!targets.count(u) && has_forbidden(u)) extras.push_back(u);
        if (!extras.empty()) res.extra = *std::min_element(extras.begin(), extras.end(), shortlex_less);
    } else {
        // Breadth-first search of the product of the subset automaton of M,
        // a suffix window that detects forbidden factors, and the prefix tree
        // of the targets. The first hit is the shortest, smallest witness.
        std::size_t window = 0;
        for (const auto& f : forbidden) window = std::max(window, f.size());
        window = window ? window - 1 : 0;
        const std::size_t sigma = M.alphabet().size();
        Trie trie(targets, sigma);
        using Key = std::tuple<std::vector<std::size_t>, bool, Word, int>;
        std::map<Key, Word> seen;
        std::deque<Key> queue;
        Key start{{M.initial()}, forbidden.count(Word{}) > 0, Word{}, 0};
        seen[start] = Word{};
        queue.push_back(start);
        while (!queue.empty()) {
            Key key = queue.front();
            queue.pop_front();
            const auto& [set, found, tail, node] = key;
            const Word here = seen[key];
            bool acc = std::any_of(set.begin(), set.end(), [&](std::size_t q) { return M.is_final(q); });
            if (acc && found && !trie.terminal(node)) {
                res.extra = here;
                break;
            }
            for (std::size_t a = 0; a < sigma; ++a) {
                std::set<std::size_t> next;
                for (auto q : set)
                    for (const auto& t : M.out(q))
                        if (t.symbol == a) next.insert(t.to);
                if (next.empty()) continue;
                Word ext = tail;
                ext.push_back(static_cast<Symbol>(a));
                bool f2 = found;
                if (!f2)
                    for (const auto& f : forbidden)
                        if (ext.size() >= f.size() && ext.compare(ext.size() - f.size(), f.size(), f) == 0)
                            f2 = true;
                Word tail2 = f2 ? Word{} : ext.substr(ext.size() > window ? ext.size() - window : 0);
                Key nk{std::vector<std::size_t>(next.begin(), next.end()), f2, tail2,
                       trie.step(node, static_cast<Symbol>(a))};
                if (seen.emplace(nk, here + static_cast<Symbol>(a)).second) queue.push_back(nk);
            }
        }
    }
    res.holds = res.missing.empty() && !res.extra;
    return res;
}

// ---------------------------------------------------------------------------

BipartiteGraph parse_graph(std::string_view text) {
    BipartiteGraph G;
    std::map<std::string, std::size_t> li, ri;
    std::vector<std::pair<std::size_t, std::pair<std::string, std::string>>> pending;
    for (const auto& line : split_lines(text)) {
        if (line.key.empty()) continue;
        if (line.key == "left" || line.key == "right") {
            auto& side = line.key == "left" ? G.left : G.right;
            auto& index = line.key == "left" ? li : ri;
            for (const auto& v : line.fields) {
                if (li.count(v) || ri.count(v))
                    throw ParseError(line.number, 1, "vertex '" + v + "' declared twice");
                index[v] = side.size();
                side.push_back(v);
            }
        } else if (line.key == "edge") {
            if (line.fields.size() != 2) throw ParseError(line.number, 1, "edge needs two vertices");
            pending.push_back({line.number, {line.fields[0], line.fields[1]}});
        } else {
            throw ParseError(line.number, 1, "unknown key '" + line.key + "'");
        }
    }
    for (const auto& [number, e] : pending) {
        auto a = li.find(e.first);
        auto b = ri.find(e.second);
        if (a == li.end()) throw ParseError(number, 1, "unknown left vertex '" + e.first + "'");
        if (b == ri.end()) throw ParseError(number, 1, "unknown right vertex '" + e.second + "'");
        G.edges.insert({a->second, b->second});
    }
    return G;
}

std::string serialize_graph(const BipartiteGraph& G) {
    std::ostringstream os;
    os << "left:";
    for (const auto& v : G.left) os << ' ' << v;
    os << "\nright:";
    for (const auto& v : G.right) os << ' ' << v;
    os << '\n';
    for (const auto& [i, j] : G.edges) os << "edge: " << G.left[i] << ' ' << G.right[j] << '\n';
    return os.str();
}

BoundedNfa parse_bounded(std::string_view text) {
    Nfa base = parse_nfa(text);
    std::optional<Model> model;
    std::size_t c = 0, bound_line = 0;
    std::vector<std::size_t> dists(base.num_states(), 1);
    std::vector<std::size_t> dist_lines;
    auto number = [](const KeyLine& line, const std::string& s) {
        try {
            std::size_t used = 0;
            long long v = std::stoll(s, &used);
            if (used != s.size() || v < 0) throw std::invalid_argument(s);
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw ParseError(line.number, 1, "expected a nonnegative integer, got '" + s + "'");
        }
    };
    for (const auto& line : split_lines(text)) {
        if (line.key == "bound") {
            if (line.fields.size() != 2) throw ParseError(line.number, 1, "bound: <ssb|rb|db> <c>");
            const auto& m = line.fields[0];
            if (m == "ssb") model = Model::Ssb;
            else if (m == "rb") model = Model::Rb;
            else if (m == "db") model = Model::Db;
            else throw ParseError(line.number, 1, "unknown model '" + m + "'");
            c = number(line, line.fields[1]);
            bound_line = line.number;
        } else if (line.key == "dist") {
            if (line.fields.size() != 3) throw ParseError(line.number, 1, "dist: <from> <to> <d>");
            std::size_t i, j;
            try {
                i = base.state_index(line.fields[0]);
                j = base.state_index(line.fields[1]);
            } catch (const UsageError& e) {
                throw ParseError(line.number, 1, e.what());
            }
            if (j != (i + 1) % base.num_states())
                throw ParseError(line.number, 1, "dist must join consecutive states");
            dists[i] = number(line, line.fields[2]);
            if (dists[i] == 0) throw ParseError(line.number, 1, "distance must be positive");
            dist_lines.push_back(line.number);
        }
    }
    if (!model) throw ParseError(1, 1, "missing 'bound:' line");
    if (*model != Model::Db && !dist_lines.empty())
        throw ParseError(dist_lines.front(), 1, "dist lines are only valid for db machines");
    if (c == 0 && *model != Model::Rb) throw ParseError(bound_line, 1, "bound must be at least 1");
    switch (*model) {
        case Model::Ssb: return make_ssb(std::move(base), c);
        case Model::Rb: return make_rb(std::move(base), c);
        case Model::Db: return make_db(std::move(base), c, dists);
    }
    return {};
}

std::string serialize_bounded(const BoundedNfa& M) {
    std::ostringstream os;
    os << serialize_nfa(M.base) << "bound: " << model_name(M.model) << ' ' << M.c << '\n';
    if (M.model == Model::Db) {
        const auto& names = M.base.states();
        for (std::size_t i = 0; i < names.size(); ++i)
            os << "dist: " << names[i] << ' ' << names[(i + 1) % names.size()] << ' '
               << M.step_dists[i] << '\n';
    }
    return os.str();
}

std::pair<Alphabet, std::set<Word>> parse_word_list(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string>> raw;
    std::optional<std::vector<std::string>> declared;
    std::size_t number = 0, pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        ++number;
        std::string body = trim(line.substr(0, line.find('#')));
        if (body.rfind("alphabet:", 0) == 0) {
            if (declared) throw ParseError(number, 1, "alphabet declared twice");
            declared = split_ws(std::string_view(body).substr(9));
        } else if (!body.empty()) {
            if (body.find_first_of(" \t") != std::string::npos)
                throw ParseError(number, 1, "one word per line");
            raw.push_back({number, body});
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (!declared) {
        std::set<char> chars;
        for (const auto& [n, w] : raw)
            if (w != "<eps>") chars.insert(w.begin(), w.end());
        declared.emplace();
        for (char ch : chars) declared->push_back(std::string(1, ch));
    }
    Alphabet alphabet;
    try {
        alphabet = Alphabet(*declared);
    } catch (const UsageError& e) {
        throw ParseError(1, 1, e.what());
    }
    std::set<Word> words;
    for (const auto& [n, w] : raw) {
        if (w == "<eps>") {
            words.insert(Word{});
            continue;
        }
        try {
            words.insert(alphabet.parse(w));
        } catch (const DomainError& e) {
            throw ParseError(n, 1, e.what());
        }
    }
    return {alphabet, words};
}

std::string serialize_word_list(const Alphabet& alphabet, const std::set<Word>& words) {
    std::vector<Word> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end(), shortlex_less);
    std::ostringstream os;
    os << "alphabet:";
    for (const auto& s : alphabet.names()) os << ' ' << s;
    os << '\n';
    for (const auto& w : sorted) os << (w.empty() ? "<eps>" : alphabet.format(w)) << '\n';
    return os.str();
}

}  // namespace cotx
