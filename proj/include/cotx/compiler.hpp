#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cotx/automata.hpp"
#include "cotx/hairpin.hpp"

namespace cotx {

enum class Backend { Abstract, Rna };

// One annotated slice [start, end) of the period. Kinds: S_ij theta_ij E_ij
// letter S_q theta_q E_q S_end theta_end E_end f_s f_e t. The provenance is
// the tag of the context the slice belongs to ("T:<state>.<j>", "S:<state>",
// "end").
struct Segment {
    std::string kind;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string provenance;
    bool operator==(const Segment&) const = default;
};

// Run-length exponents: g per state (transition block), o per state (jump
// context), oe for the end context.
struct Exponents {
    std::vector<std::size_t> g;
    std::vector<std::size_t> o;
    std::size_t oe = 0;
    bool operator==(const Exponents&) const = default;
};

struct Template {
    Backend backend = Backend::Rna;
    Word period;
    DeletionParams params;
    std::vector<std::string> context_tags;  // parallel to params.contexts
    std::vector<Segment> annotations;
    Exponents exponents;
    std::vector<std::string> state_names;
};

struct CompileOptions {
    // RNA: jump-context exponents for each state followed by the end exponent.
    std::optional<std::vector<std::size_t>> seed;
    unsigned c = 1;
    std::size_t margin = 0;
    std::size_t pump_cap = 64;
};

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Assembles a template for fixed exponents, no pumping or audit.
Template build_template(const Nfa& A, Backend backend, const Exponents& exps,
                        const CompileOptions& opts = {});

Exponents seed_exponents(const Nfa& A, Backend backend, const CompileOptions& opts = {});

Template compile_abstract(const Nfa& A, const CompileOptions& opts = {});
Template compile_rna(const Nfa& A, const CompileOptions& opts = {});

// A left-context occurrence paired with the theta block it folds onto.
struct IntendedHairpin {
    std::size_t context = 0;
    std::size_t left_start = 0;
    std::size_t theta_start = 0;
    std::size_t stem = 0;
    std::size_t loop = 0;  // measured forward around the circle
    bool ok = false;
};

std::vector<IntendedHairpin> intended_hairpins(const Template& tpl);

struct PumpResult {
    Template tpl;
    std::size_t rounds = 0;
};

// Raises run exponents until every intended hairpin meets the log bound.
// Throws CompileError when the cap is exceeded.
PumpResult pump_exponents(const Nfa& A, const Template& draft, const CompileOptions& opts = {});

struct AuditFinding {
    std::string kind;  // unintended-left, unintended-right, missing, mismatch, tiling, count, log-bound
    std::size_t context = 0;
    std::size_t offset = 0;
    std::string detail;
};

struct AuditReport {
    bool pass = true;
    std::size_t unintended = 0;
    std::size_t benign = 0;  // right-context copies that cannot close a hairpin
    std::vector<AuditFinding> findings;
};

AuditReport audit_occurrences(const Template& tpl);
std::string format_audit(const Template& tpl, const AuditReport& report);

std::string serialize_template(const Template& tpl);
Template parse_template(std::string_view text);

}  // namespace cotx
