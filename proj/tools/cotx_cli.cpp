#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cotx/automata.hpp"
#include "cotx/bounded_automata.hpp"
#include "cotx/compiler.hpp"
#include "cotx/errors.hpp"
#include "cotx/hairpin.hpp"
#include "cotx/text_util.hpp"
#include "cotx/verifier.hpp"

using namespace cotx;

namespace {

enum Exit { kOk = 0, kUsage = 1, kAudit = 2, kVerify = 3, kCap = 4 };

std::string show(const Alphabet& a, const Word& w) { return w.empty() ? "<eps>" : a.format(w); }

void emit(const std::string& out_file, const std::string& text) {
    if (out_file.empty() || out_file == "-")
        std::cout << text;
    else
        write_file(out_file, text);
}

std::vector<std::size_t> parse_counts(const std::string& s) {
    std::vector<std::size_t> out;
    std::string norm = s;
    std::replace(norm.begin(), norm.end(), ',', ' ');
    for (const auto& f : split_ws(norm)) {
        try {
            std::size_t used = 0;
            long long v = std::stoll(f, &used);
            if (used != f.size() || v < 0) throw std::invalid_argument(f);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw UsageError("expected nonnegative integers, got '" + s + "'");
        }
    }
    return out;
}

struct CompileArgs {
    std::string nfa_file, backend = "rna", out, seed;
    unsigned c = 1;
    std::size_t margin = 0, pump_cap = 64;
};

int run_compile(const CompileArgs& a) {
    Nfa A = parse_nfa(read_file(a.nfa_file));
    CompileOptions opts;
    opts.c = a.c;
    opts.margin = a.margin;
    opts.pump_cap = a.pump_cap;
    if (!a.seed.empty()) opts.seed = parse_counts(a.seed);
    try {
        Template tpl = a.backend == "rna" ? compile_rna(A, opts) : compile_abstract(A, opts);
        emit(a.out, serialize_template(tpl));
    } catch (const CompileError& e) {
        std::cerr << e.what() << '\n';
        return kAudit;
    }
    return kOk;
}

struct VerifyArgs {
    std::string nfa_file, template_file;
    long long length_bound = 4;
    long long period_bound = -1;  // unset: length bound + 3
    bool traces = false;
};

int run_verify(const VerifyArgs& a) {
    if (a.length_bound < 0) throw UsageError("--length-bound must be nonnegative");
    if (a.period_bound == 0 || a.period_bound < -1) throw UsageError("--period-bound must be positive");
    Nfa A = parse_nfa(read_file(a.nfa_file));
    Template tpl = parse_template(read_file(a.template_file));
    auto L = static_cast<std::size_t>(a.length_bound);
    std::size_t P = a.period_bound > 0 ? static_cast<std::size_t>(a.period_bound) : default_period_bound(L);
    auto rep = verify_template(A, tpl, L, P);
    std::cout << format_report(rep, A, tpl, a.traces);
    return rep.pass ? kOk : kVerify;
}

int run_audit(const std::string& template_file) {
    Template tpl = parse_template(read_file(template_file));
    auto rep = audit_occurrences(tpl);
    std::cout << format_audit(tpl, rep);
    return rep.pass ? kOk : kAudit;
}

struct SimulateArgs {
    std::string word, template_file, mode = "step", alphabet, theta;
    std::vector<std::string> contexts, terminators;
    unsigned c = 1;
    std::size_t margin = 0, stem = 0, min_loop = 0;
    long long length_bound = 4, period_bound = -1;
    bool traces = false;
};

DeletionParams params_from_flags(const SimulateArgs& a) {
    DeletionParams S;
    S.alphabet = a.alphabet.empty() ? Alphabet::rna() : Alphabet(split_ws(a.alphabet));
    if (a.theta.empty()) {
        S.theta = Involution::watson_crick(S.alphabet);
    } else {
        std::vector<std::pair<std::string, std::string>> pairs;
        std::string norm = a.theta;
        std::replace(norm.begin(), norm.end(), ',', ' ');
        for (const auto& p : split_ws(norm)) {
            auto eq = p.find('=');
            if (eq == std::string::npos) throw UsageError("--theta expects a=b pairs");
            pairs.push_back({p.substr(0, eq), p.substr(eq + 1)});
        }
        S.theta = Involution(S.alphabet, pairs);
    }
    S.c = a.c;
    S.margin = a.margin;
    S.min_loop = a.min_loop;
    for (const auto& ctx : a.contexts) {
        auto colon = ctx.find(':');
        if (colon == std::string::npos) throw UsageError("--context expects LEFT:RIGHT");
        S.contexts.push_back({S.alphabet.parse(ctx.substr(0, colon)), S.alphabet.parse(ctx.substr(colon + 1))});
    }
    for (const auto& t : a.terminators) S.terminators.push_back(S.alphabet.parse(t));
    S.stem_len = a.stem;
    return S;
}

int run_simulate(const SimulateArgs& a) {
    DeletionParams S;
    Word w;
    if (!a.template_file.empty()) {
        if (!a.word.empty()) throw UsageError("give either a word or --template, not both");
        Template tpl = parse_template(read_file(a.template_file));
        S = tpl.params;
        w = tpl.period;
    } else {
        S = params_from_flags(a);
        w = a.word == "<eps>" ? Word{} : S.alphabet.parse(a.word);
    }
    S.validate();
    std::map<Word, DeletionTrace> results;
    std::string note;
    if (a.mode == "step") {
        results = delete_step_traced(w, S);
    } else if (a.mode == "parallel" || a.mode == "maxpar") {
        results = parallel_delete_traced(w, S, a.mode == "maxpar");
    } else if (a.mode == "circular") {
        if (S.terminators.empty() || S.stem_len == 0)
            throw UsageError("circular mode needs --terminator and --stem");
        if (a.length_bound < 0 || a.period_bound == 0 || a.period_bound < -1)
            throw UsageError("length bound must be nonnegative and period bound positive");
        auto L = static_cast<std::size_t>(a.length_bound);
        std::size_t P = a.period_bound > 0 ? static_cast<std::size_t>(a.period_bound) : default_period_bound(L);
        auto res = circular_terminating_delete(CircularWord{w}, S, L, P);
        results = std::move(res.words);
        note = res.note;
    } else {
        throw UsageError("unknown mode '" + a.mode + "'");
    }
    if (!note.empty()) std::cout << "# " << note << '\n';
    for (const auto& [out, trace] : results) {
        std::cout << show(S.alphabet, out) << '\n';
        if (a.traces) std::cout << render_trace(trace, S.alphabet);
    }
    return kOk;
}

struct MinimizeArgs {
    std::string words_file, model = "ssb", metric = "states", out;
    std::size_t bound = 1, cap = 8;
};

int run_minimize(const MinimizeArgs& a) {
    auto [alphabet, words] = parse_word_list(read_file(a.words_file));
    Model model = a.model == "ssb" ? Model::Ssb : a.model == "rb" ? Model::Rb : Model::Db;
    Metric metric = a.metric == "states" ? Metric::States : Metric::Transitions;
    auto res = minimize_exact(words, alphabet, model, a.bound, metric, a.cap);
    if (!res.machine) {
        std::cerr << "none <= " << a.cap << " (" << res.explored << " search nodes)\n";
        return kCap;
    }
    emit(a.out, serialize_bounded(*res.machine));
    return kOk;
}

struct ReduceArgs {
    std::string graph_file, variant = "binary";
    std::size_t k = 1;
};

int run_reduce(const ReduceArgs& a) {
    BipartiteGraph G = parse_graph(read_file(a.graph_file));
    auto R = reduce_biclique_to_ssbmin(G, a.k, a.variant == "binary");
    std::cout << "# k' = " << R.k_prime << "\n# c = " << R.c << '\n'
              << serialize_word_list(R.alphabet, R.language);
    return kOk;
}

struct Problem1Args {
    std::string nfa_file, targets_file, forbidden_file, variant = "cover";
};

int run_problem1(const Problem1Args& a) {
    Nfa M = parse_nfa(read_file(a.nfa_file));
    auto load = [&](const std::string& file) {
        auto [alphabet, words] = parse_word_list(read_file(file));
        std::set<Word> out;
        for (const auto& w : words) out.insert(translate(w, alphabet, M.alphabet()));
        return out;
    };
    auto W = load(a.targets_file);
    auto F = a.forbidden_file.empty() ? std::set<Word>{} : load(a.forbidden_file);
    auto res = check_problem1(M, W, F, a.variant == "exact" ? Problem1Variant::Exact : Problem1Variant::Cover);
    std::cout << "holds: " << (res.holds ? "true" : "false") << '\n';
    for (const auto& w : res.missing) std::cout << "missing: " << show(M.alphabet(), w) << '\n';
    if (res.extra) std::cout << "witness: " << show(M.alphabet(), *res.extra) << '\n';
    return res.holds ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hairpin-deletion template compiler and bounded-automata toolkit"};
    app.require_subcommand(1);

    CompileArgs ca;
    auto* compile = app.add_subcommand("compile", "Compile an NFA into a circular template");
    compile->add_option("nfa", ca.nfa_file, "NFA file")->required();
    compile->add_option("--backend", ca.backend)->check(CLI::IsMember({"rna", "abstract"}));
    compile->add_option("-o,--out", ca.out, "Output file (default stdout)");
    compile->add_option("--seed", ca.seed, "Jump exponents per state, then the end exponent");
    compile->add_option("--c", ca.c, "Log factor")->check(CLI::PositiveNumber);
    compile->add_option("--margin", ca.margin, "Margin n between theta block and right context");
    compile->add_option("--pump-cap", ca.pump_cap, "Maximum pumping rounds");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check a template against its NFA up to a length bound");
    verify->add_option("nfa", va.nfa_file)->required();
    verify->add_option("template", va.template_file)->required();
    verify->add_option("-L,--length-bound", va.length_bound);
    verify->add_option("-P,--period-bound", va.period_bound, "Default: length bound + 3");
    verify->add_flag("--traces", va.traces);

    std::string audit_file;
    auto* audit = app.add_subcommand("audit", "Audit context occurrences in a template");
    audit->add_option("template", audit_file)->required();

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Run hairpin deletion on a word or template");
    simulate->add_option("word", sa.word, "Input word (<eps> for empty)");
    simulate->add_option("--template", sa.template_file, "Take word and parameters from a template");
    simulate->add_option("--mode", sa.mode)->check(CLI::IsMember({"step", "parallel", "maxpar", "circular"}));
    simulate->add_option("--alphabet", sa.alphabet, "Space separated symbols (default A U C G)");
    simulate->add_option("--theta", sa.theta, "Involution pairs a=b (default Watson-Crick)");
    simulate->add_option("--context", sa.contexts, "LEFT:RIGHT context pair, repeatable");
    simulate->add_option("--c", sa.c)->check(CLI::PositiveNumber);
    simulate->add_option("--margin", sa.margin);
    simulate->add_option("--min-loop", sa.min_loop);
    simulate->add_option("--terminator", sa.terminators, "Terminating sequence, repeatable");
    simulate->add_option("--stem", sa.stem, "Terminating stem half-length");
    simulate->add_option("-L,--length-bound", sa.length_bound);
    simulate->add_option("-P,--period-bound", sa.period_bound);
    simulate->add_flag("--traces", sa.traces);

    MinimizeArgs ma;
    auto* minimize = app.add_subcommand("minimize", "Smallest bounded machine for a finite language");
    minimize->add_option("words", ma.words_file)->required();
    minimize->add_option("--model", ma.model)->check(CLI::IsMember({"ssb", "rb", "db"}));
    minimize->add_option("--bound", ma.bound, "Bound c");
    minimize->add_option("--metric", ma.metric)->check(CLI::IsMember({"states", "transitions"}));
    minimize->add_option("--cap", ma.cap);
    minimize->add_option("-o,--out", ma.out);

    ReduceArgs ra;
    auto* reduce = app.add_subcommand("reduce", "Reduce biclique cover to bounded-machine minimization");
    reduce->add_option("graph", ra.graph_file)->required();
    reduce->add_option("--k", ra.k);
    reduce->add_option("--variant", ra.variant)->check(CLI::IsMember({"binary", "unbounded"}));

    Problem1Args pa;
    auto* problem1 = app.add_subcommand("check-problem1", "Cover set avoiding forbidden patterns");
    problem1->add_option("nfa", pa.nfa_file)->required();
    problem1->add_option("targets", pa.targets_file, "Word list W")->required();
    problem1->add_option("forbidden", pa.forbidden_file, "Word list of forbidden factors");
    problem1->add_option("--variant", pa.variant)->check(CLI::IsMember({"exact", "cover"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*compile) return run_compile(ca);
        if (*verify) return run_verify(va);
        if (*audit) return run_audit(audit_file);
        if (*simulate) return run_simulate(sa);
        if (*minimize) return run_minimize(ma);
        if (*reduce) return run_reduce(ra);
        if (*problem1) return run_problem1(pa);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
