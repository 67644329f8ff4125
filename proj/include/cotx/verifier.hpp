#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cotx/automata.hpp"
#include "cotx/compiler.hpp"
#include "cotx/hairpin.hpp"

namespace cotx {

// Words are over the template alphabet; missing/extra are shortest first.
struct VerifyReport {
    bool pass = false;
    std::size_t length_bound = 0;
    std::size_t period_bound = 0;
    std::vector<Word> expected;  // L(A) up to the length bound
    std::vector<Word> produced;  // circular deletion results
    std::vector<Word> missing;   // expected but not produced
    std::vector<Word> extra;     // produced but not expected
    std::map<Word, DeletionTrace> traces;
    bool saturated = false;
    std::string note;
};

VerifyReport verify_template(const Nfa& A, const Template& tpl, std::size_t length_bound,
                             std::size_t period_bound);

// One line per deletion step with the factor split into bracketed parts, then
// the termination and the output.
std::string render_trace(const DeletionTrace& trace, const Alphabet& alphabet);

// Verdict line, missing:/extra: lines, and optionally one trace per produced
// word. Words over A's alphabet print in A's notation.
std::string format_report(const VerifyReport& report, const Nfa& A, const Template& tpl,
                          bool with_traces);

}  // namespace cotx
