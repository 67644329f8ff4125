#include "cotx/automata.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cotx/text_util.hpp"

namespace cotx {

Nfa::Nfa(Alphabet alphabet, std::vector<std::string> states, std::size_t initial,
         std::set<std::size_t> finals, std::set<Transition> transitions)
    : alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      initial_(initial),
      finals_(std::move(finals)),
      transitions_(std::move(transitions)) {
    if (states_.empty()) throw UsageError("NFA needs at least one state");
    std::set<std::string> names(states_.begin(), states_.end());
    if (names.size() != states_.size()) throw UsageError("duplicate state name");
    if (initial_ >= states_.size()) throw UsageError("initial state out of range");
    for (auto f : finals_)
        if (f >= states_.size()) throw UsageError("final state out of range");
    out_.resize(states_.size());
    for (const auto& t : transitions_) {
        if (t.from >= states_.size() || t.to >= states_.size())
            throw UsageError("transition endpoint out of range");
        if (t.symbol >= alphabet_.size()) throw UsageError("transition symbol outside alphabet");
        out_[t.from].push_back(t);
    }
}

std::size_t Nfa::state_index(std::string_view name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) throw UsageError("unknown state '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - states_.begin());
}

namespace {

std::vector<bool> step(const Nfa& A, const std::vector<bool>& cur, Symbol a) {
    std::vector<bool> next(A.num_states(), false);
    for (std::size_t q = 0; q < cur.size(); ++q) {
        if (!cur[q]) continue;
        for (const auto& t : A.out(q))
            if (t.symbol == a) next[t.to] = true;
    }
    return next;
}

bool hits_final(const Nfa& A, const std::vector<bool>& set) {
    for (auto f : A.finals())
        if (set[f]) return true;
    return false;
}

}  // namespace

bool accepts(const Nfa& A, const Word& w) {
    std::vector<bool> cur(A.num_states(), false);
    cur[A.initial()] = true;
    for (Symbol a : w) {
        if (a >= A.alphabet().size()) throw DomainError("word symbol outside the NFA alphabet");
        cur = step(A, cur, a);
    }
    return hits_final(A, cur);
}

std::set<Word> enumerate_language(const Nfa& A, std::size_t max_len) {
    std::set<Word> out;
    std::vector<bool> start(A.num_states(), false);
    start[A.initial()] = true;
    std::map<Word, std::vector<bool>> layer{{Word{}, start}};
    for (std::size_t len = 0;; ++len) {
        for (const auto& [w, set] : layer)
            if (hits_final(A, set)) out.insert(w);
        if (len == max_len) break;
        std::map<Word, std::vector<bool>> next;
        for (const auto& [w, set] : layer) {
            for (Symbol a = 0; a < A.alphabet().size(); ++a) {
                auto s = step(A, set, a);
                if (std::none_of(s.begin(), s.end(), [](bool b) { return b; })) continue;
                next.emplace(w + a, std::move(s));
            }
        }
        if (next.empty()) break;
        layer = std::move(next);
    }
    return out;
}

std::vector<bool> useful_states(const Nfa& A) {
    const std::size_t n = A.num_states();
    std::vector<bool> fwd(n, false), bwd(n, false);
    std::vector<std::size_t> stack{A.initial()};
    fwd[A.initial()] = true;
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        for (const auto& t : A.out(q))
            if (!fwd[t.to]) fwd[t.to] = true, stack.push_back(t.to);
    }
    std::vector<std::vector<std::size_t>> rev(n);
    for (const auto& t : A.transitions()) rev[t.to].push_back(t.from);
    for (auto f : A.finals()) bwd[f] = true, stack.push_back(f);
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        for (auto p : rev[q])
            if (!bwd[p]) bwd[p] = true, stack.push_back(p);
    }
    std::vector<bool> out(n);
    for (std::size_t q = 0; q < n; ++q) out[q] = fwd[q] && bwd[q];
    return out;
}

Nfa trim(const Nfa& A) {
    auto keep = useful_states(A);
    keep[A.initial()] = true;
    std::vector<std::size_t> remap(A.num_states(), 0);
    std::vector<std::string> names;
    for (std::size_t q = 0; q < A.num_states(); ++q) {
        if (!keep[q]) continue;
        remap[q] = names.size();
        names.push_back(A.states()[q]);
    }
    std::set<std::size_t> finals;
    for (auto f : A.finals())
        if (keep[f]) finals.insert(remap[f]);
    std::set<Transition> trans;
    for (const auto& t : A.transitions())
        if (keep[t.from] && keep[t.to]) trans.insert({remap[t.from], t.symbol, remap[t.to]});
    return Nfa(A.alphabet(), names, remap[A.initial()], finals, trans);
}

bool is_finite_language(const Nfa& A) {
    auto useful = useful_states(A);
    const std::size_t n = A.num_states();
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> color(n, 0);
    auto dfs = [&](auto& self, std::size_t q) -> bool {
        color[q] = 1;
        for (const auto& t : A.out(q)) {
            if (!useful[t.to]) continue;
            if (color[t.to] == 1) return true;
            if (color[t.to] == 0 && self(self, t.to)) return true;
        }
        color[q] = 2;
        return false;
    };
    for (std::size_t q = 0; q < n; ++q)
        if (useful[q] && color[q] == 0 && dfs(dfs, q)) return false;
    return true;
}

Nfa parse_nfa(std::string_view text) {
    std::optional<Alphabet> alphabet;
    std::vector<std::string> states;
    std::optional<std::string> initial;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> finals, trans;
    for (const auto& line : split_lines(text)) {
        if (line.key.empty()) continue;
        if (line.key == "alphabet") {
            alphabet = Alphabet(line.fields);
        } else if (line.key == "states") {
            states.insert(states.end(), line.fields.begin(), line.fields.end());
        } else if (line.key == "initial") {
            if (line.fields.size() != 1) throw ParseError(line.number, 1, "initial: expects one state");
            initial = line.fields[0];
        } else if (line.key == "final") {
            finals.emplace_back(line.number, line.fields);
        } else if (line.key == "trans") {
            if (line.fields.size() != 3)
                throw ParseError(line.number, 1, "trans: expects '<from> <symbol> <to>'");
            trans.emplace_back(line.number, line.fields);
        } else if (line.key == "bound" || line.key == "dist") {
            continue;  // bounded-machine extensions, read elsewhere
        } else {
            throw ParseError(line.number, 1, "unknown key '" + line.key + "'");
        }
    }
    if (!alphabet) throw ParseError(1, 1, "missing alphabet: line");
    if (states.empty()) throw ParseError(1, 1, "missing or empty states: line");
    if (!initial) throw ParseError(1, 1, "missing initial: line");
    auto index = [&](const std::string& name, std::size_t ln) {
        auto it = std::find(states.begin(), states.end(), name);
        if (it == states.end()) throw ParseError(ln, 1, "unknown state '" + name + "'");
        return static_cast<std::size_t>(it - states.begin());
    };
    std::set<std::size_t> fin;
    for (const auto& [ln, names] : finals)
        for (const auto& n : names) fin.insert(index(n, ln));
    std::set<Transition> tr;
    for (const auto& [ln, f] : trans) {
        if (f[1] == "<eps>" || f[1] == "eps")
            throw ParseError(ln, 1, "epsilon transitions are not supported");
        auto sym = alphabet->find(f[1]);
        if (!sym) throw ParseError(ln, 1, "symbol '" + f[1] + "' not in alphabet");
        tr.insert({index(f[0], ln), *sym, index(f[2], ln)});
    }
    try {
        return Nfa(*alphabet, states, index(*initial, 1), fin, tr);
    } catch (const UsageError& e) {
        throw ParseError(1, 1, e.what());
    }
}

std::string serialize_nfa(const Nfa& A) {
    std::ostringstream os;
    os << "alphabet:";
    for (const auto& s : A.alphabet().names()) os << ' ' << s;
    os << "\nstates:";
    for (const auto& s : A.states()) os << ' ' << s;
    os << "\ninitial: " << A.states()[A.initial()] << "\nfinal:";
    for (auto f : A.finals()) os << ' ' << A.states()[f];
    os << '\n';
    for (const auto& t : A.transitions())
        os << "trans: " << A.states()[t.from] << ' ' << A.alphabet().name(t.symbol) << ' '
           << A.states()[t.to] << '\n';
    return os.str();
}

}  // namespace cotx
