#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cotx/automata.hpp"
#include "oracles.hpp"

using namespace cotx;

namespace {

const char* kFig4 =
    "alphabet: A U\nstates: q1 q2\ninitial: q1\nfinal: q2\n"
    "trans: q1 A q2\ntrans: q2 U q1\ntrans: q2 A q2\n";

const char* kAabStarAa =
    "alphabet: a b\nstates: p0 p1 p2 p3 p4\ninitial: p0\nfinal: p4\n"
    "trans: p0 a p1\ntrans: p1 a p2\ntrans: p2 b p2\ntrans: p2 a p3\ntrans: p3 a p4\n";

std::set<std::string> fmt(const Alphabet& a, const std::set<Word>& ws) {
    std::set<std::string> out;
    for (const auto& w : ws) out.insert(a.format(w));
    return out;
}

}  // namespace

TEST_CASE("fig 4 automaton acceptance") {
    Nfa A = parse_nfa(kFig4);
    const auto& a = A.alphabet();
    CHECK(accepts(A, a.parse("A")));
    CHECK_FALSE(accepts(A, Word{}));
    CHECK(accepts(A, a.parse("AUA")));
    CHECK_FALSE(accepts(A, a.parse("AU")));
    CHECK(fmt(a, enumerate_language(A, 3)) == std::set<std::string>{"A", "AA", "AAA", "AUA"});
    CHECK_FALSE(is_finite_language(A));
}

TEST_CASE("aab*aa automaton") {
    Nfa A = parse_nfa(kAabStarAa);
    CHECK(fmt(A.alphabet(), enumerate_language(A, 7)) ==
          std::set<std::string>{"aaaa", "aabaa", "aabbaa", "aabbbaa"});
    CHECK_FALSE(is_finite_language(A));
}

TEST_CASE("path automaton is finite") {
    Nfa A = parse_nfa(
        "alphabet: 0 1\nstates: a b c d e\ninitial: a\nfinal: e\n"
        "trans: a 0 b\ntrans: b 1 c\ntrans: c 1 d\ntrans: d 0 e\n");
    CHECK(is_finite_language(A));
    CHECK(enumerate_language(A, 10).size() == 1);
}

TEST_CASE("empty length bound") {
    Nfa A = parse_nfa(kFig4);
    CHECK(enumerate_language(A, 0).empty());
    Nfa B = parse_nfa("alphabet: a\nstates: s\ninitial: s\nfinal: s\n");
    CHECK(enumerate_language(B, 0) == std::set<Word>{Word{}});
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_nfa("alphabet: A\nstates: q\ninitial: q\ntrans: q B q\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse_nfa("alphabet: A\nstates:\ninitial: q\n"), ParseError);
    CHECK_THROWS_AS(parse_nfa("alphabet: A\nstates: q\ninitial: q\ntrans: q eps q\n"), ParseError);
    CHECK_THROWS_AS(parse_nfa("alphabet A\n"), ParseError);
}

TEST_CASE("serialization round trip") {
    Nfa A = parse_nfa(kAabStarAa);
    std::string text = serialize_nfa(A);
    Nfa B = parse_nfa(text);
    CHECK(serialize_nfa(B) == text);
    CHECK(B.transitions() == A.transitions());
}

TEST_CASE("trim keeps only useful states") {
    Nfa A = parse_nfa(
        "alphabet: a\nstates: s t dead\ninitial: s\nfinal: t\n"
        "trans: s a t\ntrans: s a dead\ntrans: dead a dead\n");
    Nfa T = trim(A);
    CHECK(T.num_states() == 2);
    CHECK(is_finite_language(A));
}

TEST_CASE("random automata agree with run enumeration") {
    std::mt19937 rng(31);
    for (int i = 0; i < 120; ++i) {
        auto M = oracle::random_machine(rng, 4, 7, "ab");
        Nfa A = parse_nfa(oracle::machine_text(M, "ab"));
        auto lang = fmt(A.alphabet(), enumerate_language(A, 6));
        CHECK(lang == M.language("ab", 6));
        for (std::size_t n = 0; n < 6; ++n) {
            auto small = enumerate_language(A, n), big = enumerate_language(A, n + 1);
            CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
        }
        // A finite language stops growing between |Q| and 2|Q|.
        const std::size_t q = A.num_states();
        bool stable = enumerate_language(A, q - 1 + q) == enumerate_language(A, q - 1);
        CHECK(is_finite_language(A) == stable);
    }
}
