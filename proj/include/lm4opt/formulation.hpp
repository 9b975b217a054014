#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lm4opt {

enum class ObjectiveSense { Min, Max, Unknown };

std::string to_string(ObjectiveSense sense);

// One entry of the trailing "where:" list. The symbol is the defined
// identifier with any domain qualifier (everything from "\in" on) removed.
struct Definition {
    std::string symbol;
    std::string gloss;
};

// A formulation decomposed into objective, constraints and definitions.
// Parsing is total: unparseable regions come back empty, never as errors.
struct Formulation {
    std::string raw_text;
    ObjectiveSense objective_sense = ObjectiveSense::Unknown;
    std::string objective_expression;
    std::vector<std::string> constraints;
    std::vector<Definition> definitions;
    // Parse ambiguities worth surfacing in reports (e.g. the definitions
    // list mixing decision variables with parameters/sets).
    std::vector<std::string> notes;
};

struct StructuralStats {
    std::size_t n_constraints = 0;
    std::size_t n_definitions = 0;
    ObjectiveSense objective_sense = ObjectiveSense::Unknown;
};

struct StructuralDiff {
    bool sense_match = true;
    long constraint_delta = 0;  // candidate minus reference
    long definition_delta = 0;
};

// Splits LaTeX formulation text into {objective, constraints, definitions}.
// The constraint region runs from the first "s.t."-style marker to the
// "where:" marker; it is split so that every constraint holds exactly one
// top-level relational operator (grouped rows become individual constraints,
// quantifier suffixes stay attached to theirs).
Formulation parse_formulation(std::string_view text);

StructuralStats structural_stats(const Formulation& f);

StructuralDiff structural_diff(const Formulation& candidate, const Formulation& reference);

// Number of top-level relational operators in a piece of constraint text.
// Exposed because the splitter's soundness is defined in terms of it.
std::size_t count_top_level_relops(std::string_view text);

}  // namespace lm4opt
