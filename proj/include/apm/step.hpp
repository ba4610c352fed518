#pragma once

#include <string>
#include <vector>

#include "apm/theory.hpp"

namespace apm {

/// One application of a theory axiom somewhere inside a ground term.
/// `from` is the exact subterm replaced (the matched side instance) and `to`
/// what it becomes, so a step can be replayed and inverted mechanically.
struct EquivStep {
    Position pos;
    std::string axiom;
    bool forward = true;
    Term from;
    Term to;
};

using EquivTrace = std::vector<EquivStep>;

/// Replays one axiom application; MalformedStep if the subterm at pos is not
/// exactly `from`.
Term apply_equiv_step(const Term& t, const EquivStep& s);
Term apply_trace(const Term& t, const EquivTrace& trace);
EquivStep invert(const EquivStep& s);
EquivTrace invert(const EquivTrace& trace);

/// Ground rewrite rule of the system (sides closed and of equal sort).
struct GroundRule {
    std::string name;
    Term lhs;
    Term rhs;
};

/// A rewriting step sandwiched between equivalence traces:
///     source --pre--> A[lhs] --rule--> A[rhs] --post--> target
/// Policy R steps have both traces empty; discovery usually leaves `post`
/// empty until a normalized target is requested.
struct RewritingStep {
    EquivTrace pre;
    Context ctx;
    GroundRule rule;
    EquivTrace post;
    Term source; // start of pre (== A[lhs] when pre is empty)
    Term target; // end of post (== A[rhs] when post is empty)
};

/// Replay the full step; throws MalformedStep unless every piece lines up and
/// the result equals `target`.
Term apply_step(const RewritingStep& s);

/// Convenience constructor that derives source/target from the parts and
/// validates by replay.
RewritingStep make_step(EquivTrace pre, Context ctx, GroundRule rule, EquivTrace post);

struct RewritingPath {
    std::vector<RewritingStep> steps;
    std::size_t length() const { return steps.size(); }
    bool empty() const { return steps.empty(); }
};

} // namespace apm
