#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <regex>

#include "cotx/bounded_automata.hpp"
#include "oracles.hpp"

using namespace cotx;

namespace {

const char* kLoop =
    "alphabet: a b\nstates: q0 q1\ninitial: q0\nfinal: q1\n"
    "trans: q0 a q1\ntrans: q1 b q0\n";

const char* kAabStarAa =
    "alphabet: a b\nstates: p0 p1 p2 p3 p4\ninitial: p0\nfinal: p4\n"
    "trans: p0 a p1\ntrans: p1 a p2\ntrans: p2 b p2\ntrans: p2 a p3\ntrans: p3 a p4\n";

std::set<std::string> fmt(const Alphabet& a, const std::set<Word>& ws) {
    std::set<std::string> out;
    for (const auto& w : ws) out.insert(w.empty() ? "<eps>" : a.format(w));
    return out;
}

std::set<Word> words(const Alphabet& a, std::initializer_list<const char*> list) {
    std::set<Word> out;
    for (auto s : list) out.insert(a.parse(s));
    return out;
}

// Visit counts over every run, by explicit enumeration of state sequences.
bool ssb_oracle(const oracle::Machine& M, std::size_t c, const std::string& w) {
    std::vector<std::size_t> visits(M.states, 0);
    auto rec = [&](auto&& self, std::size_t q, std::size_t pos) -> bool {
        if (visits[q] >= c) return false;
        ++visits[q];
        bool ok = false;
        if (pos == w.size()) ok = M.finals.count(q) > 0;
        for (const auto& [f, a, t] : M.trans)
            if (!ok && pos < w.size() && f == q && a == w[pos]) ok = self(self, t, pos + 1);
        --visits[q];
        return ok;
    };
    return rec(rec, M.initial, 0);
}

}  // namespace

TEST_CASE("ssb acceptance on the two-state loop") {
    Nfa A = parse_nfa(kLoop);
    const auto& a = A.alphabet();
    CHECK(ssb_accepts(A, 5, a.parse("ababababa")));
    CHECK_FALSE(ssb_accepts(A, 5, a.parse("abababababa")));
    CHECK(fmt(a, bounded_language(make_ssb(A, 5))) ==
          std::set<std::string>{"a", "aba", "ababa", "abababa", "ababababa"});
}

TEST_CASE("ssb empty word and empty final set") {
    Nfa A = parse_nfa("alphabet: a\nstates: s\ninitial: s\nfinal: s\ntrans: s a s\n");
    CHECK(ssb_accepts(A, 1, Word{}));
    CHECK(fmt(A.alphabet(), bounded_language(make_ssb(A, 3))) == std::set<std::string>{"<eps>", "a", "aa"});
    Nfa B = parse_nfa("alphabet: a\nstates: s\ninitial: s\ntrans: s a s\n");
    CHECK(bounded_language(make_ssb(B, 4)).empty());
}

TEST_CASE("ssb agrees with run enumeration and respects the length bound") {
    std::mt19937 rng(8);
    for (int i = 0; i < 100; ++i) {
        auto M = oracle::random_machine(rng, 4, 8, "ab");
        Nfa A = parse_nfa(oracle::machine_text(M, "ab"));
        std::size_t c = 1 + rng() % 3;
        auto lang = bounded_language(make_ssb(A, c));
        for (const auto& w : lang) CHECK(w.size() + 1 <= c * A.num_states());
        auto all = M.language("ab", c * A.num_states());
        std::set<std::string> expect;
        for (const auto& w : all)
            if (ssb_oracle(M, c, w)) expect.insert(w.empty() ? "<eps>" : w);
        CHECK(fmt(A.alphabet(), lang) == expect);
    }
}

TEST_CASE("ssb with a large bound equals plain acceptance on acyclic machines") {
    std::mt19937 rng(12);
    for (int i = 0; i < 60; ++i) {
        oracle::Machine M;
        M.states = 1 + rng() % 5;
        for (int k = 0; k < 6; ++k) {
            std::size_t f = rng() % M.states, t = rng() % M.states;
            if (f < t) M.trans.insert({f, "ab"[rng() % 2], t});
        }
        for (std::size_t q = 0; q < M.states; ++q)
            if (rng() % 2) M.finals.insert(q);
        Nfa A = parse_nfa(oracle::machine_text(M, "ab"));
        for (const auto& w : M.language("ab", 5)) CHECK(ssb_accepts(A, 1, A.alphabet().parse(w)));
        CHECK(bounded_language(make_ssb(A, 1)) == enumerate_language(A, M.states));
    }
}

TEST_CASE("rb descents") {
    Nfa A = parse_nfa(kLoop);
    const auto& a = A.alphabet();
    CHECK(rb_descents(A, a.parse("ababababa")) == 4u);
    CHECK(rb_accepts(A, 4, a.parse("ababababa")));
    CHECK_FALSE(rb_accepts(A, 4, a.parse("abababababa")));
    CHECK_FALSE(rb_accepts(A, 100, a.parse("b")));
    Nfa chain = parse_nfa("alphabet: a\nstates: x y z\ninitial: x\nfinal: z\ntrans: x a y\ntrans: y a z\n");
    CHECK(rb_accepts(chain, 0, chain.alphabet().parse("aa")));
}

TEST_CASE("rb picks the smallest state sequence") {
    // Two runs on "aa": s0 s2 s1 (one descent) and s0 s1 s1 (none).
    Nfa A = parse_nfa(
        "alphabet: a\nstates: s0 s1 s2\ninitial: s0\nfinal: s1\n"
        "trans: s0 a s2\ntrans: s2 a s1\ntrans: s0 a s1\ntrans: s1 a s1\n");
    CHECK(rb_descents(A, A.alphabet().parse("aa")) == 0u);
    // Smallest sequence s0 s1 s0 s2 has a descent although s0 s2 s2 s2 has none.
    Nfa B = parse_nfa(
        "alphabet: a\nstates: s0 s1 s2\ninitial: s0\nfinal: s2\n"
        "trans: s0 a s1\ntrans: s1 a s0\ntrans: s0 a s2\ntrans: s2 a s2\n");
    CHECK(rb_descents(B, B.alphabet().parse("aaa")) == 1u);
    CHECK_FALSE(rb_accepts(B, 0, B.alphabet().parse("aaa")));
}

TEST_CASE("rb language without bound needs a finite base") {
    CHECK_THROWS_AS(bounded_language(make_rb(parse_nfa(kLoop), 2)), UsageError);
    Nfa chain = parse_nfa("alphabet: a\nstates: x y\ninitial: x\nfinal: y\ntrans: x a y\n");
    CHECK(bounded_language(make_rb(chain, 0)).size() == 1);
}

TEST_CASE("db distances") {
    std::vector<std::size_t> steps{1, 2, 3};  // q0->q1, q1->q2, wrap q2->q0
    CHECK(db_distance(steps, 0, 1) == 1);
    CHECK(db_distance(steps, 0, 2) == 3);
    CHECK(db_distance(steps, 2, 0) == 3);
    CHECK(db_distance(steps, 2, 1) == 4);
    CHECK(db_distance(steps, 1, 1) == 6);
    // Two states with unit steps: the backward move costs the wrap.
    std::vector<std::size_t> unit{1, 1};
    CHECK(db_distance(unit, 1, 0) == 1);
    CHECK(db_distance(unit, 0, 0) == 2);
}

TEST_CASE("db acceptance") {
    Nfa A = parse_nfa(kLoop);
    const auto& a = A.alphabet();
    CHECK(db_accepts(A, 1, {1, 1}, a.parse("aba")));
    CHECK_FALSE(db_accepts(A, 1, {1, 5}, a.parse("aba")));
    CHECK(db_accepts(A, 1, {1, 5}, a.parse("a")));
    CHECK_FALSE(db_accepts(A, 10, {1, 1}, a.parse("b")));
    CHECK_THROWS_AS(bounded_language(make_db(A, 1, {1, 1})), UsageError);
    CHECK(bounded_language(make_db(A, 2, {1, 1}), 3).size() == 2);
}

TEST_CASE("db with unit steps and bound |Q| is plain acceptance") {
    std::mt19937 rng(4);
    for (int i = 0; i < 50; ++i) {
        auto M = oracle::random_machine(rng, 4, 7, "ab");
        Nfa A = parse_nfa(oracle::machine_text(M, "ab"));
        std::vector<std::size_t> unit(A.num_states(), 1);
        CHECK(bounded_language(make_db(A, A.num_states(), unit), 5) == enumerate_language(A, 5));
    }
}

TEST_CASE("minimize: example 2 and trivial inputs") {
    Alphabet ab({"a", "b"});
    auto L = words(ab, {"a", "aba", "ababa", "abababa", "ababababa"});
    auto r = minimize_exact(L, ab, Model::Ssb, 5, Metric::States, 4);
    REQUIRE(r.machine);
    CHECK(r.size == 2);
    CHECK(bounded_language(*r.machine) == L);

    auto plain = minimize_exact(L, ab, Model::Ssb, 1, Metric::States, 12);
    REQUIRE(plain.machine);
    CHECK(plain.size == 10);  // one path of 10 states with alternating finals
    CHECK_FALSE(minimize_exact(L, ab, Model::Ssb, 1, Metric::States, 3).machine);

    auto eps = minimize_exact({Word{}}, ab, Model::Ssb, 1, Metric::States, 3);
    REQUIRE(eps.machine);
    CHECK(eps.machine->base.num_states() == 1);
    CHECK(eps.machine->base.transitions().empty());
    CHECK(eps.machine->base.is_final(0));
    auto eps_t = minimize_exact({Word{}}, ab, Model::Ssb, 1, Metric::Transitions, 3);
    CHECK(eps_t.size == 0);
}

TEST_CASE("minimize: results are minimal against brute force over small machines") {
    // Exhaustive enumeration of all machines with up to 3 states over {a}.
    Alphabet a1({"a"});
    auto smallest = [&](const std::set<Word>& L, std::size_t c) -> std::size_t {
        for (std::size_t n = 1; n <= 3; ++n) {
            std::size_t slots = n * n;
            std::vector<std::string> names;
            for (std::size_t q = 0; q < n; ++q) names.push_back("s" + std::to_string(q));
            for (std::uint32_t fm = 0; fm < (1u << n); ++fm)
                for (std::uint32_t tm = 0; tm < (1u << slots); ++tm) {
                    std::set<std::size_t> fin;
                    for (std::size_t q = 0; q < n; ++q)
                        if (fm >> q & 1u) fin.insert(q);
                    std::set<Transition> ts;
                    for (std::size_t s = 0; s < slots; ++s)
                        if (tm >> s & 1u) ts.insert({s / n, Symbol{0}, s % n});
                    if (bounded_language(make_ssb(Nfa(a1, names, 0, fin, ts), c)) == L) return n;
                }
        }
        return 99;
    };
    std::mt19937 rng(6);
    for (int i = 0; i < 25; ++i) {
        std::set<Word> L;
        for (std::size_t len = 0; len <= 5; ++len)
            if (rng() % 2) L.insert(Word(len, Symbol{0}));
        std::size_t c = 1 + rng() % 3;
        std::size_t expect = smallest(L, c);
        auto r = minimize_exact(L, a1, Model::Ssb, c, Metric::States, 3);
        if (expect == 99) {
            CHECK_FALSE(r.machine);
        } else {
            REQUIRE(r.machine);
            CHECK(r.size == expect);
        }
    }
}

TEST_CASE("minimize: rb and db models") {
    Alphabet ab({"a", "b"});
    auto L = words(ab, {"a", "aba", "ababa"});
    auto rb = minimize_exact(L, ab, Model::Rb, 2, Metric::States, 2);
    REQUIRE(rb.machine);
    CHECK(rb.size == 2);
    CHECK(bounded_language(*rb.machine, 8) == L);
    auto db = minimize_exact(words(ab, {"ab", "abb"}), ab, Model::Db, 2, Metric::States, 4);
    REQUIRE(db.machine);
    CHECK(bounded_language(*db.machine, 6) == words(ab, {"ab", "abb"}));
}

namespace {

// Smallest unit-step Db machine (initial state 0) by trying every edge set;
// 0 when none has at most max_n states.
std::size_t db_brute_min(const std::set<std::string>& L, const std::string& sigma, std::size_t c,
                         std::size_t max_n) {
    std::size_t longest = 0;
    for (const auto& w : L) longest = std::max(longest, w.size());
    for (std::size_t n = 1; n <= max_n; ++n) {
        const std::size_t k = sigma.size(), slots = n * k * n;
        for (std::uint32_t fm = 0; fm < (1u << n); ++fm)
            for (std::uint32_t em = 0; em < (1u << slots); ++em) {
                auto ok_step = [&](std::size_t q, std::size_t a, std::size_t t) {
                    std::size_t d = t > q ? t - q : t + n - q;
                    return (em >> ((q * k + a) * n + t) & 1u) && d <= c;
                };
                auto accepts = [&](const std::string& w) {
                    std::set<std::size_t> cur{0};
                    for (char ch : w) {
                        std::size_t a = sigma.find(ch);
                        std::set<std::size_t> nxt;
                        for (auto q : cur)
                            for (std::size_t t = 0; t < n; ++t)
                                if (ok_step(q, a, t)) nxt.insert(t);
                        cur = nxt;
                    }
                    for (auto q : cur)
                        if (fm >> q & 1u) return true;
                    return false;
                };
                bool equal = true;
                // Pumping: a longer accepted word implies one within n more letters.
                for (std::size_t len = 0; len <= longest + n && equal; ++len) {
                    std::string w(len, sigma[0]);
                    std::vector<std::size_t> idx(len, 0);
                    while (true) {
                        for (std::size_t i = 0; i < len; ++i) w[i] = sigma[idx[i]];
                        if (accepts(w) != (L.count(w) > 0)) {
                            equal = false;
                            break;
                        }
                        std::size_t i = 0;
                        while (i < len && ++idx[i] == k) idx[i++] = 0;
                        if (i == len) break;
                    }
                }
                if (equal) return n;
            }
    }
    return 0;
}

}  // namespace

TEST_CASE("db minimizer agrees with exhaustive search") {
    std::mt19937 rng(99);
    for (int round = 0; round < 40; ++round) {
        const std::string sigma = round % 2 ? "a" : "ab";
        const std::size_t max_n = sigma.size() == 1 ? 3 : 2;
        const std::size_t c = 1 + rng() % 3;
        std::vector<std::string> pool{""};
        for (std::size_t len = 1; len <= 3; ++len)
            for (std::size_t i = 0; i < (std::size_t{1} << len); ++i) {
                std::string w;
                for (std::size_t j = 0; j < len; ++j) w += sigma[(i >> j & 1u) % sigma.size()];
                pool.push_back(w);
            }
        std::set<std::string> L;
        for (const auto& w : pool)
            if (rng() % 3 == 0) L.insert(w);
        Alphabet alpha(sigma == "a" ? std::vector<std::string>{"a"} : std::vector<std::string>{"a", "b"});
        std::set<Word> Lw;
        for (const auto& w : L) Lw.insert(w.empty() ? Word{} : alpha.parse(w));
        auto r = minimize_exact(Lw, alpha, Model::Db, c, Metric::States, max_n);
        std::size_t expect = db_brute_min(L, sigma, c, max_n);
        CAPTURE(round);
        CHECK((r.machine ? r.size : 0) == expect);
        if (r.machine) CHECK(bounded_language(*r.machine, 3 + max_n) == Lw);
    }
}

TEST_CASE("reduction word shapes") {
    BipartiteGraph G = parse_graph("left: a1 a2\nright: b1 b2\nedge: a1 b1\nedge: a1 b2\nedge: a2 b1\nedge: a2 b2\n");
    auto R = reduce_biclique_to_ssbmin(G, 1);
    CHECK(R.k_prime == 7);
    CHECK(R.c == 1);
    CHECK(fmt(R.alphabet, R.language) == std::set<std::string>{"0110", "01100", "00110", "001100"});
    std::regex shape("(0+)11(0+)");
    for (const auto& w : R.language) {
        std::smatch m;
        std::string s = R.alphabet.format(w);
        REQUIRE(std::regex_match(s, m, shape));
        CHECK(m[1].length() <= 2);
        CHECK(m[2].length() <= 2);
    }
    BipartiteGraph one = parse_graph("left: a\nright: b\nedge: a b\n");
    auto R1 = reduce_biclique_to_ssbmin(one, 1);
    CHECK(fmt(R1.alphabet, R1.language) == std::set<std::string>{"0110"});
    CHECK(R1.k_prime == 5);
    BipartiteGraph none = parse_graph("left: a\nright: b c\n");
    auto R0 = reduce_biclique_to_ssbmin(none, 0);
    CHECK(R0.language.empty());
    CHECK(R0.k_prime == 5);
    BipartiteGraph two3 = parse_graph(
        "left: a1 a2\nright: b1 b2 b3\nedge: a1 b1\nedge: a1 b2\nedge: a1 b3\nedge: a2 b1\nedge: a2 b2\nedge: a2 b3\n");
    auto U = reduce_biclique_to_ssbmin(two3, 1, false);
    CHECK(U.language.size() == 6);
    CHECK(U.k_prime == 3);
    for (const auto& w : U.language) CHECK(w.size() == 2);
}

TEST_CASE("biclique cover number") {
    CHECK(biclique_cover_number(parse_graph("left: a\nright: b\nedge: a b\n"), 5) == 1u);
    CHECK(biclique_cover_number(parse_graph("left: a1 a2\nright: b1 b2\nedge: a1 b1\nedge: a1 b2\nedge: a2 b1\nedge: a2 b2\n"), 5) == 1u);
    CHECK(biclique_cover_number(parse_graph("left: a1 a2\nright: b1 b2\nedge: a1 b1\nedge: a2 b1\nedge: a2 b2\n"), 5) == 2u);
    CHECK_FALSE(biclique_cover_number(parse_graph("left: a1 a2\nright: b1 b2\nedge: a1 b1\nedge: a2 b2\n"), 1));
    std::mt19937 rng(14);
    for (int i = 0; i < 80; ++i) {
        std::size_t n = 1 + rng() % 4, m = 1 + rng() % 4;
        BipartiteGraph G;
        for (std::size_t k = 0; k < n; ++k) G.left.push_back("a" + std::to_string(k));
        for (std::size_t k = 0; k < m; ++k) G.right.push_back("b" + std::to_string(k));
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < m; ++y)
                if (rng() % 2) G.edges.insert({x, y});
        CHECK(biclique_cover_number(G, 16) == oracle::cover_number(n, m, G.edges));
    }
}

TEST_CASE("graph parser") {
    CHECK_THROWS_AS(parse_graph("left: a\nright: b\nedge: a c\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("left: a\nright: a\n"), ParseError);
    BipartiteGraph G = parse_graph("left: a\nright: b\nedge: a b\n");
    CHECK(serialize_graph(parse_graph(serialize_graph(G))) == serialize_graph(G));
}

TEST_CASE("problem 1: example and mutation") {
    Nfa M = parse_nfa(kAabStarAa);
    const auto& a = M.alphabet();
    auto W = words(a, {"aabbbaa"});
    auto F = words(a, {"abbba"});
    CHECK(check_problem1(M, W, F, Problem1Variant::Cover).holds);
    CHECK(check_problem1(M, W, F, Problem1Variant::Exact).holds);

    Nfa bad = parse_nfa(
        "alphabet: a b\nstates: p0 p1 p2 p3 p4 r1 r2 r3 r4 r5\ninitial: p0\nfinal: p4 r5\n"
        "trans: p0 a p1\ntrans: p1 a p2\ntrans: p2 b p2\ntrans: p2 a p3\ntrans: p3 a p4\n"
        "trans: p0 a r1\ntrans: r1 b r2\ntrans: r2 b r3\ntrans: r3 b r4\ntrans: r4 a r5\n");
    auto res = check_problem1(bad, W, F, Problem1Variant::Cover);
    CHECK_FALSE(res.holds);
    REQUIRE(res.extra);
    CHECK(a.format(*res.extra) == "abbba");
    CHECK_THROWS_AS(check_problem1(M, W, words(a, {"bab"}), Problem1Variant::Cover), UsageError);
    auto miss = check_problem1(M, words(a, {"ab"}), {}, Problem1Variant::Exact);
    CHECK_FALSE(miss.holds);
    CHECK(miss.missing.size() == 1);
}

TEST_CASE("problem 1: exact and cover agree on short finite languages") {
    std::mt19937 rng(21);
    int compared = 0;
    for (int i = 0; i < 300 && compared < 60; ++i) {
        auto Mo = oracle::random_machine(rng, 4, 6, "ab");
        Nfa M = parse_nfa(oracle::machine_text(Mo, "ab"));
        if (!is_finite_language(M)) continue;
        auto L = enumerate_language(M, 8);
        if (L.empty()) continue;
        std::size_t longest = 0;
        for (const auto& w : L) longest = std::max(longest, w.size());
        // W holds a random subset plus one word of maximal length.
        std::set<Word> W;
        for (const auto& w : L)
            if (w.size() == longest || rng() % 2) W.insert(w);
        std::set<Word> F;
        const Word& sample = *W.rbegin();
        if (!sample.empty()) {
            std::size_t s = rng() % sample.size();
            F.insert(sample.substr(s, 1 + rng() % (sample.size() - s)));
        }
        auto exact = check_problem1(M, W, F, Problem1Variant::Exact);
        auto cover = check_problem1(M, W, F, Problem1Variant::Cover);
        CHECK(exact.holds == cover.holds);
        CHECK(exact.extra == cover.extra);
        ++compared;
    }
    CHECK(compared >= 20);
}

TEST_CASE("bounded machine and word list formats") {
    auto M = parse_bounded(std::string(kLoop) + "bound: ssb 5\n");
    CHECK(M.model == Model::Ssb);
    CHECK(M.c == 5);
    CHECK(serialize_bounded(parse_bounded(serialize_bounded(M))) == serialize_bounded(M));
    auto D = parse_bounded(std::string(kLoop) + "bound: db 3\ndist: q0 q1 2\ndist: q1 q0 4\n");
    CHECK(D.step_dists == std::vector<std::size_t>{2, 4});
    CHECK_THROWS_AS(parse_bounded(kLoop), ParseError);
    CHECK_THROWS_AS(parse_bounded(std::string(kLoop) + "bound: ssb 1\ndist: q0 q1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_bounded(std::string(kLoop) + "bound: xyz 1\n"), ParseError);

    auto [alpha, ws] = parse_word_list("# comment\nab\n<eps>\nba\n");
    CHECK(alpha.names() == std::vector<std::string>{"a", "b"});
    CHECK(ws.size() == 3);
    CHECK(serialize_word_list(alpha, ws) == "alphabet: a b\n<eps>\nab\nba\n");
    CHECK_THROWS_AS(parse_word_list("alphabet: a\nab\n"), ParseError);
}
