#include "apm/step.hpp"

namespace apm {

Term apply_equiv_step(const Term& t, const EquivStep& s) {
    Term sub = subterm_at(t, s.pos);
    if (sub != s.from)
        fail(ErrorCode::MalformedStep, "equivalence step '" + s.axiom + "' at " + s.pos.to_string() +
                                           " does not match the current subterm");
    return replace_at(t, s.pos, s.to);
}

Term apply_trace(const Term& t, const EquivTrace& trace) {
    Term cur = t;
    for (const EquivStep& s : trace) cur = apply_equiv_step(cur, s);
    return cur;
}

EquivStep invert(const EquivStep& s) { return EquivStep{s.pos, s.axiom, !s.forward, s.to, s.from}; }

EquivTrace invert(const EquivTrace& trace) {
    EquivTrace out;
    out.reserve(trace.size());
    for (auto it = trace.rbegin(); it != trace.rend(); ++it) out.push_back(invert(*it));
    return out;
}

Term apply_step(const RewritingStep& s) {
    Term mid = apply_trace(s.source, s.pre);
    if (mid != s.ctx.apply(s.rule.lhs))
        fail(ErrorCode::MalformedStep, "pre-trace of rule '" + s.rule.name + "' does not reach A[lhs]");
    Term after = s.ctx.apply(s.rule.rhs);
    Term end = apply_trace(after, s.post);
    if (end != s.target)
        fail(ErrorCode::MalformedStep, "post-trace of rule '" + s.rule.name + "' does not reach the target");
    return end;
}

RewritingStep make_step(EquivTrace pre, Context ctx, GroundRule rule, EquivTrace post) {
    RewritingStep s;
    // derive source by un-replaying the pre-trace from A[lhs]
    Term alhs = ctx.apply(rule.lhs);
    s.source = apply_trace(alhs, invert(pre));
    Term arhs = ctx.apply(rule.rhs);
    s.target = apply_trace(arhs, post);
    s.pre = std::move(pre);
    s.ctx = std::move(ctx);
    s.rule = std::move(rule);
    s.post = std::move(post);
    apply_step(s);
    return s;
}

} // namespace apm
