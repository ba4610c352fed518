#include "apm/strategy.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "apm/normalizer.hpp"

namespace apm {

const char* strategy_kind_name(StrategyKind k) {
    switch (k) {
    case StrategyKind::Full: return "FULL";
    case StrategyKind::NfModulo: return "NF_MODULO";
    case StrategyKind::GroupDeglex: return "GROUP_DEGLEX";
    }
    return "?";
}

const char* positive_verdict_name(PositiveVerdict v) {
    switch (v) {
    case PositiveVerdict::HoldsOnSample: return "HOLDS_ON_SAMPLE";
    case PositiveVerdict::Counterexample: return "COUNTEREXAMPLE";
    case PositiveVerdict::Unknown: return "UNKNOWN";
    }
    return "?";
}

PositiveStrategy resolve_strategy(const System& sys) {
    const std::string& n = sys.strategy_name;
    if (n.empty() || n == "full") return PositiveStrategy::full();
    if (n == "nf-modulo") return PositiveStrategy::nf_modulo();
    if (n == "group-deglex") {
        std::vector<Letter> ranked = sys.letter_order;
        if (ranked.empty())
            for (SymbolId q : sys.apm.constants) ranked.push_back({q, false});
        bool any_inverted = false;
        for (const Letter& l : ranked)
            if (l.inverted) any_inverted = true;
        if (!any_inverted) {
            std::size_t base = ranked.size();
            for (std::size_t i = 0; i < base; ++i) ranked.push_back(inverse(ranked[i]));
        }
        return PositiveStrategy::group_deglex(DeglexOrder::from_ranking(ranked));
    }
    fail(ErrorCode::ParseError, "unknown strategy '" + n + "'");
}

namespace {

/// NF of the oriented split modulo the unoriented one.  Linear uses the
/// candidate enumeration (complete for progress); the others scan the bounded
/// class for a forward oriented match.
bool nf_display(const System& sys, const Term& display) {
    const CartesianPolygraph& P = sys.apm.theory;
    if (sys.paradigm == ParadigmKind::Linear)
        return modc_candidates(*P.signature, display).empty();
    ClassEnumeration cls =
        enumerate_class(P, sys.apm.split.unoriented, display, sys.bounds.max_class);
    for (const Term& m : cls.members)
        for (const GroundAxiomInstance& inst : groundify_matches(P, sys.apm.split.oriented, m))
            if (inst.forward) return false;
    return true;
}

/// Membership in P₁⟨Q⟩_red: the unit alone, or a unit-free term whose ι only
/// wraps plain constants and whose leaf word is freely reduced.
bool reduced_group_term(const Signature& sig, const GroupView& gv, const Term& t) {
    if (t.is_app() && t.symbol() == gv.e) return t.args().empty();
    std::function<bool(const Term&)> structural = [&](const Term& u) -> bool {
        if (!u.is_app()) return false;
        if (u.symbol() == gv.e) return false;
        if (u.symbol() == gv.inv) {
            const Term& a = u.args()[0];
            return a.is_app() && a.args().empty() && a.symbol() != gv.e;
        }
        if (u.symbol() == gv.mu) return structural(u.args()[0]) && structural(u.args()[1]);
        return u.args().empty();
    };
    if (!structural(t)) return false;
    SignedWord w = leaf_signature(sig, t);
    return group_reduce(w) == w;
}

/// One way a display matches the σ shape u·r₁^ε·v for some rule.
struct GroupAnchor {
    const GroundRule* rule;
    int eps;
    SignedWord u, v;
};

std::vector<GroupAnchor> decode_group_display(const System& sys, const Term& display) {
    const Signature& sig = *sys.apm.theory.signature;
    GroupView gv = group_view(sig);
    std::vector<std::tuple<std::optional<Term>, Term, std::optional<Term>>> shapes;
    shapes.emplace_back(std::nullopt, display, std::nullopt);
    if (display.is_app() && display.symbol() == gv.mu) {
        const Term& A = display.args()[0];
        const Term& B = display.args()[1];
        shapes.emplace_back(std::nullopt, A, B); // μ(M, v)
        shapes.emplace_back(A, B, std::nullopt); // μ(u, M)
        if (A.is_app() && A.symbol() == gv.mu)
            shapes.emplace_back(A.args()[0], A.args()[1], B); // μ(μ(u,M),v)
        if (B.is_app() && B.symbol() == gv.mu)
            shapes.emplace_back(A, B.args()[0], B.args()[1]); // μ(u,μ(M,v))
    }
    std::vector<GroupAnchor> out;
    for (const auto& [U, M, V] : shapes) {
        for (const GroundRule& rule : sys.apm.rules) {
            for (int eps : {+1, -1}) {
                Term want = eps == 1 ? rule.lhs : Term::app(gv.inv, {rule.lhs});
                if (M != want) continue;
                if (U && !reduced_group_term(sig, gv, *U)) continue;
                if (V && !reduced_group_term(sig, gv, *V)) continue;
                out.push_back({&rule, eps, U ? leaf_signature(sig, *U) : SignedWord{},
                               V ? leaf_signature(sig, *V) : SignedWord{}});
            }
        }
    }
    return out;
}

bool deglex_positive(const System& sys, const DeglexOrder& order, const Term& display) {
    const Signature& sig = *sys.apm.theory.signature;
    for (const GroupAnchor& a : decode_group_display(sys, display)) {
        SignedWord lw = group_reduce(leaf_signature(sig, a.rule->lhs));
        SignedWord gw = group_reduce(leaf_signature(sig, a.rule->rhs));
        SignedWord m = a.eps == 1 ? lw : inverse(lw);
        SignedWord mh = a.eps == 1 ? gw : inverse(gw);
        SignedWord src = group_reduce(concat(concat(a.u, m), a.v));
        SignedWord tgt = group_reduce(concat(concat(a.u, mh), a.v));
        if (order.less(tgt, src)) return true;
    }
    return false;
}

} // namespace

bool is_positive(const System& sys, const PositiveStrategy& sigma, const RewritingStep& step) {
    if (sigma.kind == StrategyKind::Full) return true;
    Term display = apply_trace(step.source, step.pre);
    if (sigma.kind == StrategyKind::NfModulo) return nf_display(sys, display);
    return deglex_positive(sys, *sigma.order, display);
}

Term sigma_representative(const System& sys, const PositiveStrategy& sigma, const Term& t) {
    const CartesianPolygraph& P = sys.apm.theory;
    switch (sigma.kind) {
    case StrategyKind::Full:
        return canonical_key(P, sys.apm.split, sys.paradigm, t, sys.bounds);
    case StrategyKind::NfModulo: {
        if (sys.paradigm != ParadigmKind::Generic)
            return canonical_key(P, sys.apm.split, sys.paradigm, t, sys.bounds);
        // generic: rewrite with the oriented split modulo the unoriented one
        Term cur = t;
        for (std::size_t guard = 0; guard < 10000; ++guard) {
            ClassEnumeration cls =
                enumerate_class(P, sys.apm.split.unoriented, cur, sys.bounds.max_class);
            bool progressed = false;
            for (const Term& m : cls.members) {
                for (const GroundAxiomInstance& inst : groundify_matches(P, sys.apm.split.oriented, m))
                    if (inst.forward) {
                        cur = inst.ctx.apply(inst.to);
                        progressed = true;
                        break;
                    }
                if (progressed) break;
            }
            if (!progressed) return *std::min_element(cls.members.begin(), cls.members.end());
        }
        fail(ErrorCode::BoundExhausted, "oriented normalization did not converge");
    }
    case StrategyKind::GroupDeglex: {
        std::optional<Term> best;
        for (const RewritingStep& st : find_redexes(sys, t))
            if (is_positive(sys, sigma, st)) {
                Term d = apply_trace(st.source, st.pre);
                if (!best || d < *best) best = d;
            }
        if (best) return *best;
        // rule-free class: fall back to the canonical reduced term
        return canonical_key(P, sys.apm.split, ParadigmKind::Group, t, sys.bounds);
    }
    }
    fail(ErrorCode::ParseError, "unreachable strategy kind");
}

namespace {

/// The reverse-anchored closing step of the group positive-confluence proof:
/// for a step displayed u·r₁^ε·v, the candidate b′ rewrites
/// red(u r₂^ε) · r₁^{-ε} · red(r₁^ε v), landing back in the source class.
std::optional<RewritingStep> reverse_group_step(const System& sys, const GroupAnchor& a,
                                                const Term& tgt_key) {
    const CartesianPolygraph& P = sys.apm.theory;
    const Signature& sig = *P.signature;
    GroupView gv = group_view(sig);
    SignedWord lw = group_reduce(leaf_signature(sig, a.rule->lhs));
    SignedWord gw = group_reduce(leaf_signature(sig, a.rule->rhs));
    SignedWord m = a.eps == 1 ? lw : inverse(lw);
    SignedWord mh = a.eps == 1 ? gw : inverse(gw);
    SignedWord u2 = group_reduce(concat(a.u, mh));
    SignedWord v2 = group_reduce(concat(m, a.v));
    int eps2 = -a.eps;
    Term M = eps2 == 1 ? a.rule->lhs : Term::app(gv.inv, {a.rule->lhs});
    Term d;
    Position pos;
    if (u2.empty() && v2.empty()) {
        d = M;
    } else if (u2.empty()) {
        d = Term::app(gv.mu, {M, signed_word_to_term(sig, v2)});
        pos = pos.child(1);
    } else if (v2.empty()) {
        d = Term::app(gv.mu, {signed_word_to_term(sig, u2), M});
        pos = pos.child(2);
    } else {
        d = Term::app(gv.mu, {Term::app(gv.mu, {signed_word_to_term(sig, u2), M}),
                              signed_word_to_term(sig, v2)});
        pos = pos.child(1).child(2);
    }
    if (eps2 == -1) pos = pos.child(1);
    try {
        EquivTrace to_key = canonical_trace(P, sys.apm.split, ParadigmKind::Group, d).trace;
        Term key = apply_trace(d, to_key);
        if (key != tgt_key) return std::nullopt;
        return make_step(invert(to_key), Context::at(sig, d, pos), *a.rule, {});
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace

PositiveConfluenceReport positive_confluence_check(const System& sys, const PositiveStrategy& sigma,
                                                   const std::vector<Term>& seeds) {
    PositiveConfluenceReport rep;
    const CartesianPolygraph& P = sys.apm.theory;
    try {
        // sampling stays near the seeds: caps far below the reachability
        // defaults keep the group expansions affordable
        System local = sys;
        local.bounds.max_terms = std::min<std::size_t>(sys.bounds.max_terms, 64);
        local.bounds.max_depth = std::min<std::size_t>(sys.bounds.max_depth, 8);
        ReachabilityGraph g = reachability(local, seeds.empty() ? default_seeds(sys) : seeds);
        std::map<Term, std::vector<Term>> pos_cache;
        auto pos_targets = [&](const Term& key) -> const std::vector<Term>& {
            auto it = pos_cache.find(key);
            if (it != pos_cache.end()) return it->second;
            std::vector<Term> out;
            for (const RewritingStep& st : find_redexes(sys, key))
                if (is_positive(sys, sigma, st))
                    out.push_back(canonical_key(P, sys.apm.split, sys.paradigm, st.target, sys.bounds));
            return pos_cache.emplace(key, std::move(out)).first->second;
        };
        auto same_class = [&](const Term& a, const Term& b) {
            if (a == b) return true;
            if (sys.paradigm == ParadigmKind::Generic)
                return equiv_modulo(P, sys.paradigm, a, b, sys.bounds) == Tri::True;
            return false;
        };
        bool capped = false;
        for (std::size_t i = 0; i < g.keys.size() && !capped; ++i) {
            for (const ReachEdge& e : g.out[i]) {
                if (rep.samples >= sys.bounds.sample_cap) {
                    capped = true;
                    break;
                }
                ++rep.samples;
                if (sigma.kind == StrategyKind::Full) continue; // a′ = a, b′ identity
                const Term& src = g.keys[i];
                const Term& tgt = g.keys[e.to];
                std::vector<Term> A{src};
                for (const Term& k : pos_targets(src)) A.push_back(k);
                std::vector<Term> B{tgt};
                for (const Term& k : pos_targets(tgt)) B.push_back(k);
                if (sigma.kind == StrategyKind::GroupDeglex) {
                    // the constructive closing of deglex-increasing steps
                    Term display = apply_trace(e.step.source, e.step.pre);
                    for (const GroupAnchor& a : decode_group_display(sys, display))
                        if (auto st = reverse_group_step(sys, a, tgt))
                            if (is_positive(sys, sigma, *st))
                                B.push_back(canonical_key(P, sys.apm.split, sys.paradigm,
                                                          st->target, sys.bounds));
                }
                bool closed = false;
                for (const Term& x : A) {
                    for (const Term& y : B)
                        if (same_class(x, y)) {
                            closed = true;
                            break;
                        }
                    if (closed) break;
                }
                if (!closed) {
                    rep.verdict = PositiveVerdict::Counterexample;
                    rep.counterexample = e.step;
                    rep.detail = "no positive closing of length <= 1 found for a sampled step";
                    return rep;
                }
            }
        }
        rep.verdict = PositiveVerdict::HoldsOnSample;
        rep.detail = std::to_string(rep.samples) + " sampled steps closed";
    } catch (const Error& err) {
        rep.verdict = PositiveVerdict::Unknown;
        rep.detail = err.what();
    }
    return rep;
}

} // namespace apm
