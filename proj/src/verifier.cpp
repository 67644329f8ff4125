#include "cotx/verifier.hpp"

#include <algorithm>
#include <sstream>

namespace cotx {

namespace {

bool shortlex_less(const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
}

std::string show(const Alphabet& alphabet, const Word& w) {
    return w.empty() ? "<eps>" : alphabet.format(w);
}

std::string piece(const Alphabet& alphabet, const Word& text, std::size_t from, std::size_t len) {
    return alphabet.format(text.substr(from, len));
}

}  // namespace

VerifyReport verify_template(const Nfa& A, const Template& tpl, std::size_t length_bound,
                             std::size_t period_bound) {
    const Alphabet& ta = tpl.params.alphabet;
    for (const auto& name : A.alphabet().names())
        if (!ta.contains(name))
            throw UsageError("automaton symbol '" + name + "' is not in the template alphabet");

    VerifyReport rep;
    rep.length_bound = length_bound;
    rep.period_bound = period_bound;
    for (const auto& w : enumerate_language(A, length_bound))
        rep.expected.push_back(translate(w, A.alphabet(), ta));
    std::sort(rep.expected.begin(), rep.expected.end(), shortlex_less);

    auto result = circular_terminating_delete(CircularWord{tpl.period}, tpl.params, length_bound,
                                              period_bound);
    rep.saturated = result.saturated;
    rep.note = result.note;
    rep.traces = std::move(result.words);
    for (const auto& [w, trace] : rep.traces) rep.produced.push_back(w);
    std::sort(rep.produced.begin(), rep.produced.end(), shortlex_less);

    std::set_difference(rep.expected.begin(), rep.expected.end(), rep.produced.begin(),
                        rep.produced.end(), std::back_inserter(rep.missing), shortlex_less);
    std::set_difference(rep.produced.begin(), rep.produced.end(), rep.expected.begin(),
                        rep.expected.end(), std::back_inserter(rep.extra), shortlex_less);
    rep.pass = rep.missing.empty() && rep.extra.empty();
    return rep;
}

std::string render_trace(const DeletionTrace& trace, const Alphabet& alphabet) {
    std::ostringstream os;
    const Word& in = trace.input;
    os << "input: " << show(alphabet, in);
    if (trace.period_len) os << "  (period " << trace.period_len << ")";
    os << '\n';
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const auto& h = trace.steps[k];
        os << "step " << k + 1 << " at " << h.start;
        if (trace.period_len) os << " (period offset " << h.start % trace.period_len << ")";
        os << ": [" << piece(alphabet, in, h.start, h.alpha_len) << '|'
           << piece(alphabet, in, h.start + h.alpha_len, h.x_len) << "]("
           << piece(alphabet, in, h.loop_start(), h.loop_len) << ")["
           << piece(alphabet, in, h.theta_start(), h.x_len) << '|'
           << piece(alphabet, in, h.theta_start() + h.x_len, h.alpha_len) << "]{"
           << piece(alphabet, in, h.z_start(), h.z_len) << "}<"
           << piece(alphabet, in, h.beta_start(), h.beta_len) << ">\n";
    }
    if (trace.termination) {
        const auto& t = *trace.termination;
        os << "terminate: t at " << t.offset << ", stem [" << alphabet.format(t.stem) << "]\n";
    }
    os << "output: " << show(alphabet, trace.output) << '\n';
    return os.str();
}

std::string format_report(const VerifyReport& report, const Nfa& A, const Template& tpl,
                          bool with_traces) {
    const Alphabet& ta = tpl.params.alphabet;
    auto name = [&](const Word& w) {
        if (w.empty()) return std::string("<eps>");
        try {
            return A.alphabet().format(translate(w, ta, A.alphabet()));
        } catch (const DomainError&) {
            return ta.format(w);
        }
    };
    std::ostringstream os;
    os << "verdict: " << (report.pass ? "pass" : "fail") << " length_bound=" << report.length_bound
       << " period_bound=" << report.period_bound << " expected=" << report.expected.size()
       << " produced=" << report.produced.size()
       << " saturated=" << (report.saturated ? "yes" : "no") << '\n';
    if (!report.note.empty()) os << "note: " << report.note << '\n';
    for (const auto& w : report.missing) os << "missing: " << name(w) << '\n';
    for (const auto& w : report.extra) os << "extra: " << name(w) << '\n';
    if (with_traces)
        for (const auto& w : report.produced) {
            os << "trace: " << name(w) << '\n' << render_trace(report.traces.at(w), ta);
        }
    return os.str();
}

}  // namespace cotx
