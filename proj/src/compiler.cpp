#include "cotx/compiler.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cotx/text_util.hpp"

namespace cotx {

namespace {

// Words for every construction piece under one backend.
struct Shape {
    Alphabet alphabet;
    Involution theta;
    std::vector<Word> letters;  // NFA symbol -> template word (one symbol)
    std::vector<std::vector<Word>> pieces;  // [state][j-1] = S_{i,j}
    std::vector<std::vector<Word>> rights;  // [state][j-1] = E_{i,j}
    std::vector<Word> state_left, state_right;
    Word end_left, end_right, f_s, t;
};

// Outgoing transitions in construction order: by target state, then symbol.
std::vector<Transition> ordered_out(const Nfa& A, std::size_t q) {
    auto ts = A.out(q);
    std::sort(ts.begin(), ts.end(), [](const Transition& a, const Transition& b) {
        return std::pair(a.to, a.symbol) < std::pair(b.to, b.symbol);
    });
    return ts;
}

std::size_t block_count(const Nfa& A, std::size_t q) {
    return A.out(q).size() + (A.is_final(q) ? 1 : 0);
}

Word run(Symbol s, std::size_t n) { return Word(n, s); }

Shape rna_shape(const Nfa& A, const Exponents& e) {
    Shape sh;
    sh.alphabet = Alphabet::rna();
    sh.theta = Involution::watson_crick(sh.alphabet);
    const auto& al = sh.alphabet;
    for (const auto& name : A.alphabet().names()) {
        auto s = al.find(name);
        if (!s) throw UsageError("symbol '" + name + "' is not an RNA base");
        sh.letters.push_back(Word(1, *s));
    }
    const Symbol a = al.at("A"), c = al.at("C"), u = al.at("U"), g = al.at("G");
    const Word gaa{g, a, a};
    for (std::size_t i = 0; i < A.num_states(); ++i) {
        std::vector<Word> ps, rs;
        Word prefix;
        for (std::size_t j = 0; j < block_count(A, i); ++j) {
            Word piece = j == 0 ? run(a, 2) + run(c, e.g[i]) + run(a, 2) + gaa : gaa;
            prefix += piece;
            ps.push_back(piece);
            rs.push_back(apply_involution(sh.theta, prefix));
        }
        sh.pieces.push_back(ps);
        sh.rights.push_back(rs);
        Word left = run(a, 3) + run(c, e.o[i]) + run(a, 3);
        sh.state_left.push_back(left);
        sh.state_right.push_back(apply_involution(sh.theta, left));
    }
    sh.end_left = run(a, 3) + run(c, e.oe) + run(a, 3);
    sh.end_right = apply_involution(sh.theta, sh.end_left);
    sh.f_s = run(a, 4) + Word(1, g) + run(a, 4);
    sh.t = run(u, 10);
    return sh;
}

Shape abstract_shape(const Nfa& A, const Exponents& e) {
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> pairs;
    auto fresh = [&](const std::string& n) {
        names.push_back(n);
        names.push_back("~" + n);
        pairs.emplace_back(n, "~" + n);
    };
    for (const auto& n : A.alphabet().names()) fresh(n);
    const std::size_t o = A.num_states();
    for (std::size_t i = 0; i < o; ++i) {
        for (std::size_t j = 0; j < block_count(A, i); ++j) {
            fresh("_s" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
            fresh("_e" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
        }
        fresh("_q" + std::to_string(i + 1));
        fresh("_r" + std::to_string(i + 1));
    }
    for (const char* n : {"_z", "_y", "_f", "_t"}) fresh(n);

    Shape sh;
    try {
        sh.alphabet = Alphabet(names);
    } catch (const UsageError& err) {
        throw UsageError(std::string("abstract alphabet clash: ") + err.what());
    }
    sh.theta = Involution(sh.alphabet, pairs);
    const auto& al = sh.alphabet;
    for (const auto& n : A.alphabet().names()) sh.letters.push_back(Word(1, al.at(n)));
    for (std::size_t i = 0; i < o; ++i) {
        std::vector<Word> ps, rs;
        for (std::size_t j = 0; j < block_count(A, i); ++j) {
            const std::string ij = std::to_string(i + 1) + "_" + std::to_string(j + 1);
            ps.push_back(run(al.at("_s" + ij), e.g[i]));
            rs.push_back(run(al.at("_e" + ij), e.g[i]));
        }
        sh.pieces.push_back(ps);
        sh.rights.push_back(rs);
        sh.state_left.push_back(run(al.at("_q" + std::to_string(i + 1)), e.o[i]));
        sh.state_right.push_back(run(al.at("_r" + std::to_string(i + 1)), e.o[i]));
    }
    sh.end_left = run(al.at("_z"), e.oe);
    sh.end_right = run(al.at("_y"), e.oe);
    sh.f_s = Word(1, al.at("_f"));
    sh.t = Word(1, al.at("_t"));
    return sh;
}

std::string state_tag(const Nfa& A, std::size_t q) { return "S:" + A.states()[q]; }
std::string trans_tag(const Nfa& A, std::size_t q, std::size_t j) {
    return "T:" + A.states()[q] + "." + std::to_string(j + 1);
}

void make_distinct(std::vector<std::size_t>& v) {
    std::set<std::size_t> used;
    for (auto& x : v) {
        while (used.count(x)) ++x;
        used.insert(x);
    }
}

void normalize(Exponents& e) {
    make_distinct(e.g);
    make_distinct(e.o);
    while (std::find(e.o.begin(), e.o.end(), e.oe) != e.o.end()) ++e.oe;
}

}  // namespace

Exponents seed_exponents(const Nfa& A, Backend backend, const CompileOptions& opts) {
    const std::size_t o = A.num_states();
    Exponents e;
    for (std::size_t i = 0; i < o; ++i) e.g.push_back(backend == Backend::Rna ? i + 1 : 1);
    if (opts.seed) {
        if (opts.seed->size() != o + 1)
            throw UsageError("exponent seed needs one value per state plus the end value");
        for (auto v : *opts.seed)
            if (v == 0) throw UsageError("exponent seeds must be positive");
        e.o.assign(opts.seed->begin(), opts.seed->end() - 1);
        e.oe = opts.seed->back();
    } else {
        const std::size_t base = backend == Backend::Rna ? 4 : 0;
        for (std::size_t i = 0; i < o; ++i) e.o.push_back(base + i + 1);
        e.oe = base + o + 1;
    }
    normalize(e);
    return e;
}

Template build_template(const Nfa& A, Backend backend, const Exponents& exps,
                        const CompileOptions& opts) {
    if (A.num_states() == 0) throw UsageError("NFA has no states");
    if (A.initial() != 0) throw UsageError("the initial state must be declared first");
    const std::size_t o = A.num_states();
    if (exps.g.size() != o || exps.o.size() != o) throw UsageError("exponent vector size mismatch");
    const Shape sh = backend == Backend::Rna ? rna_shape(A, exps) : abstract_shape(A, exps);

    Template tpl;
    tpl.backend = backend;
    tpl.exponents = exps;
    tpl.state_names = A.states();
    auto add = [&](const char* kind, const Word& w, const std::string& prov) {
        tpl.annotations.push_back({kind, tpl.period.size(), tpl.period.size() + w.size(), prov});
        tpl.period += w;
    };
    auto th = [&](const Word& w) { return apply_involution(sh.theta, w); };

    auto& ctxs = tpl.params.contexts;
    for (std::size_t m = 0; m < o; ++m) {
        ctxs.push_back({sh.state_left[m], sh.state_right[m]});
        tpl.context_tags.push_back(state_tag(A, m));
    }
    std::vector<std::vector<Word>> lefts(o);
    for (std::size_t i = 0; i < o; ++i) {
        Word prefix;
        for (std::size_t j = 0; j < sh.pieces[i].size(); ++j) {
            prefix += sh.pieces[i][j];
            lefts[i].push_back(prefix);
            ctxs.push_back({prefix, sh.rights[i][j]});
            tpl.context_tags.push_back(trans_tag(A, i, j));
        }
    }
    ctxs.push_back({sh.end_left, sh.end_right});
    tpl.context_tags.push_back("end");

    for (std::size_t i = 0; i < o; ++i) {
        const auto trans = ordered_out(A, i);
        for (std::size_t j = 0; j < sh.pieces[i].size(); ++j)
            add("S_ij", sh.pieces[i][j], trans_tag(A, i, j));
        for (std::size_t j = 0; j < trans.size(); ++j) {
            const auto tag = trans_tag(A, i, j);
            add("theta_ij", th(lefts[i][j]), tag);
            add("E_ij", sh.rights[i][j], tag);
            add("letter", sh.letters[trans[j].symbol], tag);
            add("S_q", sh.state_left[trans[j].to], state_tag(A, trans[j].to));
        }
        if (A.is_final(i)) {
            const std::size_t j = trans.size();
            const auto tag = trans_tag(A, i, j);
            add("theta_ij", th(lefts[i][j]), tag);
            add("E_ij", sh.rights[i][j], tag);
            add("f_s", sh.f_s, tag);
            add("S_end", sh.end_left, "end");
        }
        if (i + 1 < o) {
            add("theta_q", th(sh.state_left[i + 1]), state_tag(A, i + 1));
            add("E_q", sh.state_right[i + 1], state_tag(A, i + 1));
        }
    }
    add("theta_end", th(sh.end_left), "end");
    add("E_end", sh.end_right, "end");
    add("f_e", th(sh.f_s), "end");
    add("t", sh.t, "end");
    add("theta_q", th(sh.state_left[0]), state_tag(A, 0));
    add("E_q", sh.state_right[0], state_tag(A, 0));

    auto& p = tpl.params;
    p.alphabet = sh.alphabet;
    p.theta = sh.theta;
    p.c = opts.c;
    p.margin = opts.margin;
    p.terminators = {sh.t};
    p.stem_len = sh.f_s.size();
    p.validate();
    return tpl;
}

std::vector<IntendedHairpin> intended_hairpins(const Template& tpl) {
    std::vector<IntendedHairpin> out;
    const std::size_t per = tpl.period.size();
    for (std::size_t ci = 0; ci < tpl.context_tags.size(); ++ci) {
        const auto& tag = tpl.context_tags[ci];
        std::string left_kind, theta_kind, first_tag = tag;
        if (tag.rfind("T:", 0) == 0) {
            left_kind = "S_ij";
            theta_kind = "theta_ij";
            first_tag = tag.substr(0, tag.rfind('.')) + ".1";
        } else if (tag.rfind("S:", 0) == 0) {
            left_kind = "S_q";
            theta_kind = "theta_q";
        } else {
            left_kind = "S_end";
            theta_kind = "theta_end";
        }
        std::optional<std::size_t> theta;
        for (const auto& s : tpl.annotations)
            if (s.kind == theta_kind && s.provenance == tag) theta = s.start;
        if (!theta) continue;
        const std::size_t a = tpl.params.contexts[ci].left.size();
        for (const auto& s : tpl.annotations) {
            if (s.kind != left_kind || s.provenance != first_tag) continue;
            IntendedHairpin h;
            h.context = ci;
            h.left_start = s.start;
            h.theta_start = *theta;
            h.stem = a;
            const std::size_t left_end = s.start + a;
            h.loop = *theta >= left_end ? *theta - left_end : *theta + per - left_end;
            h.ok = log_hairpin_ok(h.stem, h.loop, tpl.params.c) && h.loop >= tpl.params.min_loop;
            out.push_back(h);
        }
    }
    return out;
}

PumpResult pump_exponents(const Nfa& A, const Template& draft, const CompileOptions& opts) {
    Template cur = draft;
    Exponents e = draft.exponents;
    const std::size_t o = A.num_states();
    for (std::size_t round = 1; round <= opts.pump_cap; ++round) {
        std::set<std::string> bumps;
        for (const auto& h : intended_hairpins(cur)) {
            if (h.ok) continue;
            const auto& tag = cur.context_tags[h.context];
            bumps.insert(tag.rfind("T:", 0) == 0 ? tag.substr(0, tag.rfind('.')) : tag);
        }
        if (bumps.empty()) return {cur, round};
        for (std::size_t i = 0; i < o; ++i) {
            if (bumps.count("T:" + A.states()[i])) ++e.g[i];
            if (bumps.count(state_tag(A, i))) ++e.o[i];
        }
        if (bumps.count("end")) ++e.oe;
        normalize(e);
        cur = build_template(A, draft.backend, e, opts);
    }
    throw CompileError("exponent pumping did not converge within " +
                       std::to_string(opts.pump_cap) + " rounds");
}

namespace {

// A state with no encoding would expose the next state's landing pad as kept
// output, so useless states are dropped first.
Template compile_with(const Nfa& input, Backend backend, const CompileOptions& opts) {
    if (input.num_states() == 0) throw UsageError("NFA has no states");
    if (input.initial() != 0) throw UsageError("the initial state must be declared first");
    const Nfa A = trim(input);
    auto draft = build_template(A, backend, seed_exponents(A, backend, opts), opts);
    auto pumped = pump_exponents(A, draft, opts).tpl;
    auto report = audit_occurrences(pumped);
    if (!report.pass) throw CompileError("audit failed:\n" + format_audit(pumped, report));
    return pumped;
}

}  // namespace

Template compile_abstract(const Nfa& A, const CompileOptions& opts) {
    return compile_with(A, Backend::Abstract, opts);
}

Template compile_rna(const Nfa& A, const CompileOptions& opts) {
    return compile_with(A, Backend::Rna, opts);
}

AuditReport audit_occurrences(const Template& tpl) {
    AuditReport rep;
    const auto& P = tpl.params;
    const Word& w = tpl.period;
    const std::size_t per = w.size();
    auto fail = [&](std::string kind, std::size_t ci, std::size_t off, std::string detail) {
        rep.findings.push_back({std::move(kind), ci, off, std::move(detail)});
    };

    // Tiling.
    auto segs = tpl.annotations;
    std::sort(segs.begin(), segs.end(),
              [](const Segment& a, const Segment& b) { return a.start < b.start; });
    std::size_t cursor = 0;
    for (const auto& s : segs) {
        if (s.start != cursor || s.end < s.start) fail("tiling", 0, s.start, "gap or overlap");
        cursor = std::max(cursor, s.end);
    }
    if (cursor != per) fail("tiling", 0, cursor, "annotations do not cover the period");
    if (cursor > per) {
        rep.pass = false;
        return rep;
    }

    std::map<std::string, std::size_t> by_tag;
    for (std::size_t ci = 0; ci < tpl.context_tags.size(); ++ci) by_tag[tpl.context_tags[ci]] = ci;
    auto slice = [&](const Segment& s) { return w.substr(s.start, s.end - s.start); };
    auto th = [&](const Word& x) { return apply_involution(P.theta, x); };

    // Segment contents against the context set.
    std::map<std::size_t, std::set<std::size_t>> left_starts, right_starts, theta_starts;
    std::optional<Word> f_e;
    for (const auto& s : segs)
        if (s.kind == "f_e") f_e = slice(s);
    for (const auto& s : segs) {
        const Word got = slice(s);
        if (s.kind == "letter") {
            if (got.size() != 1) fail("mismatch", 0, s.start, "letter segment is not one symbol");
            continue;
        }
        if (s.kind == "t") {
            if (std::find(P.terminators.begin(), P.terminators.end(), got) == P.terminators.end())
                fail("mismatch", 0, s.start, "t segment is not a terminating sequence");
            continue;
        }
        if (s.kind == "f_e") {
            if (got.size() != P.stem_len) fail("mismatch", 0, s.start, "f_e length differs from m");
            continue;
        }
        if (s.kind == "f_s") {
            if (!f_e || got != th(*f_e) || got.size() != P.stem_len)
                fail("mismatch", 0, s.start, "f_s is not theta(f_e)");
            continue;
        }
        auto it = by_tag.find(s.provenance);
        if (it == by_tag.end()) {
            fail("mismatch", 0, s.start, "unknown provenance '" + s.provenance + "'");
            continue;
        }
        const std::size_t ci = it->second;
        const auto& ctx = P.contexts[ci];
        Word expect;
        if (s.kind == "S_ij") {
            // piece j = left(j) minus left(j-1)
            const auto& tag = s.provenance;
            const std::size_t dot = tag.rfind('.');
            const std::size_t j = std::stoul(tag.substr(dot + 1));
            std::size_t prev_len = 0;
            if (j > 1) {
                auto pit = by_tag.find(tag.substr(0, dot + 1) + std::to_string(j - 1));
                if (pit != by_tag.end()) prev_len = P.contexts[pit->second].left.size();
            }
            expect = ctx.left.substr(std::min(prev_len, ctx.left.size()));
            if (j == 1) left_starts[ci].insert(s.start);
        } else if (s.kind == "S_q" || s.kind == "S_end") {
            expect = ctx.left;
            left_starts[ci].insert(s.start);
        } else if (s.kind == "theta_ij" || s.kind == "theta_q" || s.kind == "theta_end") {
            expect = th(ctx.left);
            theta_starts[ci].insert(s.start);
        } else if (s.kind == "E_ij" || s.kind == "E_q" || s.kind == "E_end") {
            expect = ctx.right;
            right_starts[ci].insert(s.start);
        } else {
            fail("mismatch", ci, s.start, "unknown segment kind '" + s.kind + "'");
            continue;
        }
        if (got != expect) fail("mismatch", ci, s.start, s.kind + " content differs from its context");
    }

    // Transition-block lefts start at piece 1 of their state.
    for (std::size_t ci = 0; ci < tpl.context_tags.size(); ++ci) {
        const auto& tag = tpl.context_tags[ci];
        if (tag.rfind("T:", 0) != 0) continue;
        auto first = by_tag.find(tag.substr(0, tag.rfind('.')) + ".1");
        if (first != by_tag.end()) left_starts[ci] = left_starts[first->second];
    }

    // Occurrence scan over the middle copy of three periods.
    const Word text = repeat(w, 3);
    for (std::size_t ci = 0; ci < P.contexts.size(); ++ci) {
        const auto& ctx = P.contexts[ci];
        const Word theta_left = th(ctx.left);
        for (auto s : occurrences(ctx.left, text)) {
            if (s < per || s >= 2 * per) continue;
            if (!left_starts[ci].count(s - per)) fail("unintended-left", ci, s - per, "");
        }
        for (auto s : left_starts[ci])
            if (text.compare(per + s, ctx.left.size(), ctx.left) != 0)
                fail("missing", ci, s, "left context absent at its intended position");
        std::size_t aligned = 0;
        for (auto b : occurrences(ctx.right, text)) {
            if (b < per || b >= 2 * per) continue;
            const std::size_t pos = b - per;
            if (right_starts[ci].count(pos) || (ctx.right == theta_left && theta_starts[ci].count(pos))) {
                ++aligned;
                continue;
            }
            bool closes = false;
            for (std::size_t z = 0; z <= P.margin && !closes; ++z) {
                if (b < z + theta_left.size()) break;
                closes = text.compare(b - z - theta_left.size(), theta_left.size(), theta_left) == 0;
            }
            if (closes)
                fail("unintended-right", ci, pos, "right context preceded by theta(left)");
            else
                ++rep.benign;
        }
        const std::size_t uses = right_starts[ci].size();
        const std::size_t expected = ctx.right == theta_left ? 2 * uses : uses;
        if (aligned != expected)
            fail("count", ci, 0,
                 "right context seen " + std::to_string(aligned) + " times at intended slots, expected " +
                     std::to_string(expected));
    }

    for (const auto& h : intended_hairpins(tpl))
        if (!h.ok)
            fail("log-bound", h.context, h.left_start,
                 "stem " + std::to_string(h.stem) + " cannot close loop " + std::to_string(h.loop));

    for (const auto& f : rep.findings)
        if (f.kind == "unintended-left" || f.kind == "unintended-right") ++rep.unintended;
    rep.pass = rep.findings.empty();
    return rep;
}

std::string format_audit(const Template& tpl, const AuditReport& report) {
    std::ostringstream os;
    os << "audit: " << (report.pass ? "pass" : "fail") << " unintended=" << report.unintended
       << " benign=" << report.benign << '\n';
    for (const auto& f : report.findings) {
        os << "finding: " << f.kind << " ctx="
           << (f.context < tpl.context_tags.size() ? tpl.context_tags[f.context] : "-")
           << " offset=" << f.offset;
        if (!f.detail.empty()) os << " " << f.detail;
        os << '\n';
    }
    return os.str();
}

// ---- template text format ----

namespace {

bool is_rna_wc(const DeletionParams& p) {
    return p.alphabet == Alphabet::rna() && p.theta == Involution::watson_crick(p.alphabet);
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::vector<std::size_t> split_sizes(const std::string& s, std::size_t ln) {
    std::vector<std::size_t> out;
    if (s.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        auto comma = s.find(',', pos);
        auto tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            out.push_back(std::stoul(tok));
        } catch (...) {
            throw ParseError(ln, 1, "bad number '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

std::string serialize_template(const Template& tpl) {
    const auto& P = tpl.params;
    const auto& al = P.alphabet;
    std::ostringstream os;
    os << ">template c=" << P.c << " n=" << P.margin << " m=" << P.stem_len << " t=";
    for (std::size_t i = 0; i < P.terminators.size(); ++i) os << (i ? "," : "") << al.format(P.terminators[i]);
    if (P.min_loop) os << " min_loop=" << P.min_loop;
    os << '\n';
    if (!is_rna_wc(P)) {
        os << "alphabet:";
        for (const auto& n : al.names()) os << ' ' << n;
        os << "\ntheta:";
        for (Symbol s = 0; s < al.size(); ++s)
            if (P.theta(s) > s) os << ' ' << al.name(s) << '=' << al.name(P.theta(s));
        os << '\n';
    }
    os << al.format(tpl.period) << '\n';
    for (std::size_t i = 0; i < P.contexts.size(); ++i)
        os << "ctx: " << al.format(P.contexts[i].left) << ' ' << al.format(P.contexts[i].right) << ' '
           << tpl.context_tags[i] << '\n';
    const auto& e = tpl.exponents;
    os << "exp: " << (tpl.backend == Backend::Rna ? "rna" : "abstract") << " g=" << join_sizes(e.g)
       << " o=" << join_sizes(e.o) << " oe=" << e.oe << '\n';
    os << "states:";
    for (const auto& s : tpl.state_names) os << ' ' << s;
    os << '\n';
    for (const auto& s : tpl.annotations)
        os << "@seg " << s.kind << ' ' << s.start << ' ' << s.end << ' ' << s.provenance << '\n';
    return os.str();
}

Template parse_template(std::string_view text) {
    Template tpl;
    auto& P = tpl.params;
    P.alphabet = Alphabet::rna();
    bool have_header = false, have_period = false;
    std::vector<std::string> theta_pairs;
    std::size_t theta_line = 0;
    std::string period_text;
    std::vector<std::string> t_texts;
    std::vector<std::tuple<std::size_t, std::string, std::string, std::string>> ctx_lines;

    std::size_t ln = 0, pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view rawv = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        ++ln;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        std::string line = trim(rawv.substr(0, rawv.find('#')));
        if (line.empty()) continue;
        auto f = split_ws(line);
        if (!have_header) {
            if (f[0] != ">template") throw ParseError(ln, 1, "expected '>template' header");
            have_header = true;
            for (std::size_t i = 1; i < f.size(); ++i) {
                auto eq = f[i].find('=');
                if (eq == std::string::npos) throw ParseError(ln, 1, "bad header field '" + f[i] + "'");
                auto key = f[i].substr(0, eq), val = f[i].substr(eq + 1);
                try {
                    if (key == "c") P.c = static_cast<unsigned>(std::stoul(val));
                    else if (key == "n") P.margin = std::stoul(val);
                    else if (key == "m") P.stem_len = std::stoul(val);
                    else if (key == "min_loop") P.min_loop = std::stoul(val);
                    else if (key == "t") {
                        std::size_t p0 = 0;
                        while (true) {
                            auto comma = val.find(',', p0);
                            t_texts.push_back(val.substr(p0, comma == std::string::npos ? comma : comma - p0));
                            if (comma == std::string::npos) break;
                            p0 = comma + 1;
                        }
                    } else throw ParseError(ln, 1, "unknown header field '" + key + "'");
                } catch (const std::logic_error&) {
                    throw ParseError(ln, 1, "bad value in '" + f[i] + "'");
                }
            }
            continue;
        }
        if (f[0] == "alphabet:") {
            P.alphabet = Alphabet(std::vector<std::string>(f.begin() + 1, f.end()));
        } else if (f[0] == "theta:") {
            theta_pairs.assign(f.begin() + 1, f.end());
            theta_line = ln;
        } else if (f[0] == "ctx:") {
            if (f.size() != 4) throw ParseError(ln, 1, "ctx: expects '<left> <right> <tag>'");
            ctx_lines.emplace_back(ln, f[1], f[2], f[3]);
        } else if (f[0] == "exp:") {
            if (f.size() != 5) throw ParseError(ln, 1, "exp: expects backend g= o= oe=");
            if (f[1] == "rna") tpl.backend = Backend::Rna;
            else if (f[1] == "abstract") tpl.backend = Backend::Abstract;
            else throw ParseError(ln, 1, "unknown backend '" + f[1] + "'");
            auto val = [&](const std::string& s, const char* key) {
                if (s.rfind(key, 0) != 0) throw ParseError(ln, 1, std::string("expected ") + key);
                return s.substr(std::string(key).size());
            };
            tpl.exponents.g = split_sizes(val(f[2], "g="), ln);
            tpl.exponents.o = split_sizes(val(f[3], "o="), ln);
            auto oe = split_sizes(val(f[4], "oe="), ln);
            if (oe.size() != 1) throw ParseError(ln, 1, "oe= expects one number");
            tpl.exponents.oe = oe[0];
        } else if (f[0] == "states:") {
            tpl.state_names.assign(f.begin() + 1, f.end());
        } else if (f[0] == "@seg") {
            if (f.size() != 5) throw ParseError(ln, 1, "@seg expects '<kind> <start> <end> <provenance>'");
            try {
                tpl.annotations.push_back({f[1], std::stoul(f[2]), std::stoul(f[3]), f[4]});
            } catch (const std::logic_error&) {
                throw ParseError(ln, 1, "bad @seg offsets");
            }
        } else if (!have_period && f.size() == 1) {
            period_text = f[0];
            have_period = true;
        } else {
            throw ParseError(ln, 1, "unexpected line");
        }
    }
    if (!have_header) throw ParseError(1, 1, "empty template");
    if (!have_period) throw ParseError(ln, 1, "missing period line");
    try {
        if (theta_line) {
            std::vector<std::pair<std::string, std::string>> pairs;
            for (const auto& p : theta_pairs) {
                auto eq = p.find('=');
                if (eq == std::string::npos) throw ParseError(theta_line, 1, "theta: expects a=b pairs");
                pairs.emplace_back(p.substr(0, eq), p.substr(eq + 1));
            }
            P.theta = Involution(P.alphabet, pairs);
        } else {
            P.theta = Involution::watson_crick(P.alphabet);
        }
        tpl.period = P.alphabet.parse(period_text);
        for (const auto& t : t_texts) P.terminators.push_back(P.alphabet.parse(t));
        for (const auto& [cl, l, r, tag] : ctx_lines) {
            P.contexts.push_back({P.alphabet.parse(l), P.alphabet.parse(r)});
            tpl.context_tags.push_back(tag);
        }
        P.validate();
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(ln, 1, e.what());
    }
    if (tpl.period.empty()) throw ParseError(ln, 1, "empty period");
    return tpl;
}

}  // namespace cotx
