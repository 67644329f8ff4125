#include "cotx/hairpin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

namespace cotx {

namespace {
constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
}

void DeletionParams::validate() const {
    if (c < 1) throw UsageError("log factor c must be at least 1");
    if (theta.mapping().size() != alphabet.size())
        throw UsageError("involution does not match the alphabet");
    for (const auto& ctx : contexts) {
        if (ctx.left.empty() || ctx.right.empty())
            throw UsageError("context components must be nonempty");
        for (Symbol s : ctx.left + ctx.right)
            if (s >= alphabet.size()) throw DomainError("context symbol outside alphabet");
    }
    if (!terminators.empty()) {
        if (stem_len < 1) throw UsageError("terminating stem length m must be at least 1");
        for (const auto& t : terminators)
            if (t.empty()) throw UsageError("terminating sequences must be nonempty");
    }
}

bool log_hairpin_ok(std::size_t stem_len, std::size_t loop_len, unsigned c) {
    if (loop_len <= 1) return true;
    if (stem_len >= 120) {
        return static_cast<long double>(stem_len) >=
               static_cast<long double>(c) * std::log2(static_cast<long double>(loop_len));
    }
    // loop^c <= 2^stem with early exit before overflow.
    const unsigned __int128 cap = static_cast<unsigned __int128>(1) << stem_len;
    unsigned __int128 p = 1;
    for (unsigned i = 0; i < c; ++i) {
        if (p > cap / loop_len) return false;
        p *= loop_len;
    }
    return p <= cap;
}

HairpinScanner::HairpinScanner(const Word& text, const DeletionParams& S)
    : text_(text), S_(S), left_end_(text.size() + 1, npos) {
    const std::size_t k = S.contexts.size();
    theta_left_.resize(k);
    left_at_.assign(k, std::vector<char>(text.size() + 1, 0));
    theta_at_.assign(k, std::vector<char>(text.size() + 1, 0));
    beta_pos_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& ctx = S.contexts[i];
        theta_left_[i] = apply_involution(S.theta, ctx.left);
        for (auto p : occurrences(ctx.left, text)) {
            left_at_[i][p] = 1;
            left_end_[p] = std::min(left_end_[p], p + ctx.left.size());
        }
        for (auto p : occurrences(theta_left_[i], text)) theta_at_[i][p] = 1;
        beta_pos_[i] = occurrences(ctx.right, text);
    }
}

void HairpinScanner::occurrences_at(std::size_t q, std::size_t limit,
                                    std::vector<HairpinOccurrence>& out) const {
    limit = std::min(limit, text_.size());
    for (std::size_t ci = 0; ci < S_.contexts.size(); ++ci) {
        if (!left_at_[ci][q]) continue;
        const std::size_t a = S_.contexts[ci].left.size();
        const std::size_t b = S_.contexts[ci].right.size();
        const auto& betas = beta_pos_[ci];
        for (auto it = std::lower_bound(betas.begin(), betas.end(), q + 2 * a); it != betas.end();
             ++it) {
            const std::size_t bp = *it;
            if (bp + b > limit) break;
            for (std::size_t z = 0; z <= S_.margin; ++z) {
                if (bp < z + a || bp - z - a < q + a) break;
                const std::size_t ts = bp - z - a;
                if (!theta_at_[ci][ts]) continue;
                const std::size_t gap = ts - (q + a);
                std::size_t kmax = 0;
                while (2 * (kmax + 1) <= gap &&
                       text_[q + a + kmax] == S_.theta(text_[ts - 1 - kmax]))
                    ++kmax;
                for (std::size_t x = 0; x <= kmax; ++x) {
                    const std::size_t loop = gap - 2 * x;
                    if (loop < S_.min_loop) break;
                    if (!log_hairpin_ok(a + x, loop, S_.c)) continue;
                    out.push_back({q, ci, a, x, loop, z, b});
                }
            }
        }
    }
}

std::vector<HairpinOccurrence> HairpinScanner::deletable_from(std::size_t q,
                                                              std::size_t limit) const {
    std::vector<HairpinOccurrence> all;
    occurrences_at(q, limit, all);
    std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) {
        if (l.end() != r.end()) return l.end() < r.end();
        return l < r;
    });
    std::vector<HairpinOccurrence> out;
    for (const auto& o : all)
        if (out.empty() || out.back().end() != o.end()) out.push_back(o);
    return out;
}

namespace {

bool spec_order(const HairpinOccurrence& l, const HairpinOccurrence& r) {
    auto key = [](const HairpinOccurrence& o) {
        return std::tuple(o.start, o.stem_len(), o.z_len, o.context, o.end());
    };
    return key(l) < key(r);
}

bool is_stem(const Word& s, std::size_t m, const Involution& theta) {
    if (s.size() != 2 * m) return false;
    return s.substr(m) == apply_involution(theta, s.substr(0, m));
}

}  // namespace

std::vector<HairpinOccurrence> find_hairpin_occurrences(const Word& w, const DeletionParams& S) {
    HairpinScanner sc(w, S);
    std::vector<HairpinOccurrence> out;
    for (std::size_t q = 0; q < w.size(); ++q) sc.occurrences_at(q, w.size(), out);
    std::sort(out.begin(), out.end(), spec_order);
    return out;
}

bool any_hairpin(const Word& w, const DeletionParams& S) {
    HairpinScanner sc(w, S);
    std::vector<HairpinOccurrence> buf;
    for (std::size_t q = 0; q < w.size(); ++q) {
        sc.occurrences_at(q, w.size(), buf);
        if (!buf.empty()) return true;
    }
    return false;
}

std::map<Word, DeletionTrace> delete_step_traced(const Word& w, const DeletionParams& S) {
    std::map<Word, DeletionTrace> out;
    for (const auto& o : find_hairpin_occurrences(w, S)) {
        Word r = w.substr(0, o.start) + w.substr(o.end());
        if (out.count(r)) continue;
        out.emplace(r, DeletionTrace{w, 0, {o}, r, std::nullopt});
    }
    return out;
}

std::set<Word> delete_step(const Word& w, const DeletionParams& S) {
    std::set<Word> out;
    for (auto& [r, _] : delete_step_traced(w, S)) out.insert(r);
    return out;
}

bool deletable_to_empty(const Word& w, const DeletionParams& S) {
    if (w.empty()) return false;
    HairpinScanner sc(w, S);
    auto ends = sc.deletable_from(0, w.size());
    return !ends.empty() && ends.back().end() == w.size();
}

std::map<Word, DeletionTrace> parallel_delete_traced(const Word& w, const DeletionParams& S,
                                                     bool maximal) {
    HairpinScanner sc(w, S);
    const std::size_t n = w.size();
    std::vector<std::vector<HairpinOccurrence>> dels(n + 1);
    for (std::size_t q = 0; q < n; ++q) dels[q] = sc.deletable_from(q, n);

    // suffix outputs obtainable from a u-segment starting at p, after at
    // least one deletion already happened; value = the steps used.
    using Suffixes = std::map<Word, std::vector<HairpinOccurrence>>;
    std::vector<std::optional<Suffixes>> memo(n + 1);

    auto expand = [&](auto& self, std::size_t p, bool after_deletion) -> Suffixes {
        Suffixes res;
        if (after_deletion) {
            Word last = w.substr(p);
            if (!maximal || !any_hairpin(last, S)) res.emplace(last, std::vector<HairpinOccurrence>{});
        }
        std::size_t min_end = npos;
        for (std::size_t q = p; q < n; ++q) {
            if (maximal) {
                if (q > p) min_end = std::min(min_end, sc.left_end(q - 1));
                if (min_end <= q) break;
            }
            for (const auto& o : dels[q]) {
                const std::size_t r = o.end();
                if (!memo[r]) memo[r] = self(self, r, true);
                for (const auto& [suffix, steps] : *memo[r]) {
                    Word full = w.substr(p, q - p) + suffix;
                    if (res.count(full)) continue;
                    std::vector<HairpinOccurrence> st{o};
                    st.insert(st.end(), steps.begin(), steps.end());
                    res.emplace(std::move(full), std::move(st));
                }
            }
        }
        return res;
    };

    std::map<Word, DeletionTrace> out;
    for (auto& [word, steps] : expand(expand, 0, false))
        out.emplace(word, DeletionTrace{w, 0, steps, word, std::nullopt});
    return out;
}

std::set<Word> parallel_delete(const Word& w, const DeletionParams& S, bool maximal) {
    std::set<Word> out;
    for (auto& [r, _] : parallel_delete_traced(w, S, maximal)) out.insert(r);
    return out;
}

std::optional<Word> replay(const DeletionTrace& trace, const DeletionParams& S) {
    Word kept;
    std::size_t pos = 0;
    for (const auto& o : trace.steps) {
        if (o.start < pos || o.end() > trace.input.size()) return std::nullopt;
        Word factor = trace.input.substr(o.start, o.end() - o.start);
        if (!deletable_to_empty(factor, S)) return std::nullopt;
        kept += trace.input.substr(pos, o.start - pos);
        pos = o.end();
    }
    kept += trace.input.substr(pos);
    if (trace.termination) {
        const auto& term = *trace.termination;
        if (kept.size() < term.stem.size() ||
            kept.substr(kept.size() - term.stem.size()) != term.stem ||
            !is_stem(term.stem, S.stem_len, S.theta))
            return std::nullopt;
        kept.resize(kept.size() - term.stem.size());
    }
    if (kept != trace.output) return std::nullopt;
    return kept;
}

CircularResult circular_terminating_delete(const CircularWord& cw, const DeletionParams& S,
                                           std::size_t length_bound, std::size_t period_bound) {
    if (S.terminators.empty()) throw UsageError("circular deletion needs terminating sequences");
    if (S.stem_len < 1) throw UsageError("circular deletion needs a stem length m >= 1");
    if (period_bound < 1) throw UsageError("period bound must be at least 1");
    S.validate();

    CircularResult result;
    const Word text = unroll(cw, period_bound);
    const std::size_t per = cw.period.size();
    const std::size_t N = text.size();
    const std::size_t m = S.stem_len;
    const std::size_t budget = length_bound + 2 * m;

    std::vector<std::pair<std::size_t, std::size_t>> stops;  // (offset of t, t index)
    for (std::size_t ti = 0; ti < S.terminators.size(); ++ti)
        for (auto e : occurrences(S.terminators[ti], text)) stops.emplace_back(e, ti);
    std::sort(stops.begin(), stops.end());
    if (stops.empty()) {
        result.note = "no terminating sequence occurs within the unrolled prefix";
        return result;
    }

    HairpinScanner sc(text, S);
    std::vector<std::optional<std::vector<HairpinOccurrence>>> dels(N + 1);

    struct Node {
        std::size_t pos;
        Word out;
        std::size_t parent;
        HairpinOccurrence step;  // the deletion that led here
    };
    std::vector<Node> nodes;
    std::unordered_map<Word, std::size_t> seen;  // key: pos mod period + output
    using Item = std::pair<std::size_t, std::size_t>;  // (pos, node)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;

    auto key_of = [&](std::size_t pos, const Word& out) {
        Word k;
        k.push_back(static_cast<Symbol>(pos % per));
        k.push_back(static_cast<Symbol>((pos % per) >> 16));
        k += out;
        return k;
    };

    auto trace_of = [&](std::size_t node, std::size_t stop, const Word& full, const Word& out) {
        DeletionTrace tr;
        tr.input = text.substr(0, stops[stop].first);
        tr.period_len = per;
        for (std::size_t i = node; i != 0; i = nodes[i].parent) tr.steps.push_back(nodes[i].step);
        std::reverse(tr.steps.begin(), tr.steps.end());
        tr.output = out;
        tr.termination = Termination{stops[stop].second, stops[stop].first, full.substr(out.size())};
        return tr;
    };

    // Reading a terminator right after a 2m stem ends transcription, so no
    // derivation may keep t in [p, q) when the output before it ends in a stem.
    auto forced_stop = [&](std::size_t p, const Word& out, std::size_t q) {
        auto it = std::lower_bound(stops.begin(), stops.end(), Item{p, 0});
        for (; it != stops.end() && it->first < q; ++it) {
            const std::size_t e = it->first;
            if (e + S.terminators[it->second].size() > q) continue;
            if (out.size() + (e - p) < 2 * m) continue;
            Word full = out + text.substr(p, e - p);
            if (is_stem(full.substr(full.size() - 2 * m), m, S.theta)) return true;
        }
        return false;
    };

    auto try_terminate = [&](std::size_t node) {
        const std::size_t p = nodes[node].pos;
        const Word& out = nodes[node].out;
        auto it = std::lower_bound(stops.begin(), stops.end(), Item{p, 0});
        for (; it != stops.end(); ++it) {
            const std::size_t e = it->first;
            if (e - p + out.size() > budget) break;
            Word last = text.substr(p, e - p);
            Word full = out + last;
            if (full.size() < 2 * m) continue;
            if (!is_stem(full.substr(full.size() - 2 * m), m, S.theta)) continue;
            Word word = full.substr(0, full.size() - 2 * m);
            if (word.size() > length_bound || result.words.count(word)) continue;
            if (any_hairpin(last, S) || forced_stop(p, out, e)) continue;
            if (e + per >= N) result.saturated = true;
            result.words.emplace(word, trace_of(node, static_cast<std::size_t>(it - stops.begin()),
                                                full, word));
        }
    };

    auto push = [&](std::size_t pos, Word out, std::size_t parent, const HairpinOccurrence& step) {
        Word k = key_of(pos, out);
        auto it = seen.find(k);
        if (it != seen.end()) {
            Node& old = nodes[it->second];
            if (old.pos <= pos) return;
            old = Node{pos, std::move(out), parent, step};
            pq.emplace(pos, it->second);
            return;
        }
        nodes.push_back(Node{pos, std::move(out), parent, step});
        seen.emplace(std::move(k), nodes.size() - 1);
        pq.emplace(pos, nodes.size() - 1);
    };

    auto expand = [&](std::size_t p, const Word& out, std::size_t self) {
        std::size_t min_end = npos;
        for (std::size_t q = p; q < N && out.size() + (q - p) <= budget; ++q) {
            if (q > p) min_end = std::min(min_end, sc.left_end(q - 1));
            if (min_end <= q) break;
            if (sc.left_end(q) == npos) continue;
            if (forced_stop(p, out, q)) break;
            if (!dels[q]) dels[q] = sc.deletable_from(q, N);
            for (const auto& o : *dels[q]) push(o.end(), out + text.substr(p, q - p), self, o);
        }
    };

    // Node 0 is the derivation with no deletions yet.
    nodes.push_back(Node{0, Word{}, npos, HairpinOccurrence{}});
    seen.emplace(key_of(0, Word{}), 0);
    pq.emplace(0, 0);
    while (!pq.empty()) {
        auto [pos, id] = pq.top();
        pq.pop();
        if (nodes[id].pos != pos) continue;
        try_terminate(id);
        Word out = nodes[id].out;
        expand(pos, out, id);
    }
    return result;
}

}  // namespace cotx
