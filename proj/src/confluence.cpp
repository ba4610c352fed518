#include "apm/confluence.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "apm/engine.hpp"
#include "apm/paradigm.hpp"

namespace apm {

namespace {

Term key_of(const System& sys, const Term& t) {
    return canonical_key(sys.apm.theory, sys.apm.split, sys.paradigm, t, sys.bounds);
}

Term display_of(const RewritingStep& s) { return apply_trace(s.source, s.pre); }

bool syntactic_policy(StepPolicy p) { return p == StepPolicy::R || p == StepPolicy::RPE; }

Position prepend(std::uint32_t c, const Position& pos) {
    Position np;
    np = np.child(c);
    for (std::uint32_t x : pos.path) np = np.child(x);
    return np;
}

std::string native(const System& sys, const Term& t) {
    ParadigmSpec spec{sys.paradigm, sys.field, sys.letter_order,
                      sys.apm.theory.signature->infix()};
    try {
        return render_native(spec, sys.apm.theory, t);
    } catch (const Error&) {
        return term_to_string(*sys.apm.theory.signature, t);
    }
}

// ---------------------------------------------------------------------------
// footprints
// ---------------------------------------------------------------------------

// letters of a µ-arrangement, unit leaves erased
std::size_t letter_count(SymbolId mu, std::optional<SymbolId> unit, const Term& t) {
    if (t.is_app() && t.symbol() == mu)
        return letter_count(mu, unit, t.args()[0]) + letter_count(mu, unit, t.args()[1]);
    if (unit && t.is_app() && t.symbol() == *unit) return 0;
    return 1;
}

// letters strictly left of the subtree at pos
std::size_t letters_before(SymbolId mu, std::optional<SymbolId> unit, const Term& t,
                           const Position& pos) {
    std::size_t off = 0;
    Term cur = t;
    for (std::uint32_t i : pos.path) {
        for (std::uint32_t k = 1; k < i; ++k) off += letter_count(mu, unit, cur.args()[k - 1]);
        cur = cur.args()[i - 1];
    }
    return off;
}

struct Interval {
    std::size_t lo, hi;
};

bool intervals_disjoint(const Interval& a, const Interval& b) {
    return a.hi <= b.lo || b.hi <= a.lo;
}

// uncancelled signed leaf word of a group display (units erased, inversions
// pushed through), so a subtree always covers a contiguous letter range
void raw_signed(const GroupView& gv, const Term& t, bool inv, SignedWord& out) {
    if (t.is_app() && t.symbol() == gv.mu) {
        raw_signed(gv, t.args()[inv ? 1 : 0], inv, out);
        raw_signed(gv, t.args()[inv ? 0 : 1], inv, out);
        return;
    }
    if (t.is_app() && t.symbol() == gv.inv) {
        raw_signed(gv, t.args()[0], !inv, out);
        return;
    }
    if (t.is_app() && t.symbol() == gv.e) return;
    out.push_back(Letter{t.symbol(), inv});
}

SignedWord raw_signed(const GroupView& gv, const Term& t) {
    SignedWord w;
    raw_signed(gv, t, false, w);
    return w;
}

std::size_t raw_width(const GroupView& gv, const Term& t) {
    if (t.is_app() && t.symbol() == gv.mu)
        return raw_width(gv, t.args()[0]) + raw_width(gv, t.args()[1]);
    if (t.is_app() && t.symbol() == gv.inv) return raw_width(gv, t.args()[0]);
    if (t.is_app() && t.symbol() == gv.e) return 0;
    return 1;
}

// range the subtree at pos covers inside raw_signed(t); inversion nodes flip
// which side of the word the children land on
Interval raw_range(const GroupView& gv, const Term& t, const Position& pos) {
    std::size_t lo = 0, hi = raw_width(gv, t);
    Term cur = t;
    bool inv = false;
    for (std::uint32_t i : pos.path) {
        if (cur.symbol() == gv.mu) {
            std::size_t w1 = raw_width(gv, cur.args()[0]);
            bool left = (i == 1) != inv; // child i sits on the left end?
            if (left)
                hi = lo + (i == 1 ? w1 : raw_width(gv, cur.args()[1]));
            else
                lo = hi - (i == 1 ? w1 : raw_width(gv, cur.args()[1]));
        } else if (cur.symbol() == gv.inv) {
            inv = !inv;
        }
        cur = cur.args()[i - 1];
    }
    return {lo, hi};
}

// the ⊕-summand of a linear display the hole lives in
Term monomial_container(const LinearView& lv, const Term& display, const Position& hole) {
    Term cur = display;
    for (std::uint32_t i : hole.path) {
        if (!(cur.is_app() && cur.symbol() == lv.oplus)) break;
        cur = cur.args()[i - 1];
    }
    return cur;
}

std::set<Word> support_of(const Signature& sig, const Term& t) {
    std::set<Word> s;
    Polynomial p = linear_canonical(sig, t);
    for (const auto& [w, c] : p.terms()) s.insert(w);
    return s;
}

// ---------------------------------------------------------------------------
// designated-step realization
// ---------------------------------------------------------------------------

std::optional<RewritingStep> string_step_at(const System& sys, SymbolId mu,
                                            std::optional<SymbolId> unit, const Word& W,
                                            const Term& key, std::size_t rule_idx,
                                            std::size_t off) {
    const CartesianPolygraph& P = sys.apm.theory;
    const Signature& sig = *P.signature;
    const GroundRule& rule = sys.apm.rules[rule_idx];
    Word l = assoc_flatten(sig, mu, unit, rule.lhs);
    if (syntactic_policy(sys.apm.policy)) {
        for (const auto& [pos, sub] : enumerate_positions(key)) {
            if (sub != rule.lhs) continue;
            if (letters_before(mu, unit, key, pos) != off) continue;
            return make_step({}, Context::at(sig, key, pos), rule, {});
        }
        return std::nullopt;
    }
    Word b(W.begin() + off + l.size(), W.end());
    Term d = b.empty() ? rule.lhs : Term::app(mu, {rule.lhs, word_to_term(sig, mu, unit, b)});
    Position pos;
    if (!b.empty()) pos = pos.child(1);
    for (std::size_t k = off; k-- > 0;) {
        d = Term::app(mu, {Term::app(W[k]), d});
        pos = prepend(2, pos);
    }
    EquivTrace pre = invert(canonical_trace(P, sys.apm.split, ParadigmKind::String, d).trace);
    RewritingStep st = make_step(pre, Context::at(sig, d, pos), rule, {});
    if (st.source != key) return std::nullopt;
    return st;
}

std::optional<RewritingStep> linear_step_at(const System& sys, const LinearView& lv,
                                            const Word& W, const Term& key,
                                            std::size_t rule_idx, std::size_t off,
                                            std::size_t rule_len) {
    const CartesianPolygraph& P = sys.apm.theory;
    const Signature& sig = *P.signature;
    const GroundRule& rule = sys.apm.rules[rule_idx];
    if ((off > 0 || off + rule_len < W.size()) && !lv.dot) return std::nullopt;
    if (syntactic_policy(sys.apm.policy)) {
        SymbolId dot = lv.dot ? *lv.dot : lv.oplus; // oplus never flattens a monomial
        for (const auto& [pos, sub] : enumerate_positions(key)) {
            if (sub != rule.lhs) continue;
            if (letters_before(dot, std::nullopt, key, pos) != off) continue;
            return make_step({}, Context::at(sig, key, pos), rule, {});
        }
        return std::nullopt;
    }
    Word b(W.begin() + off + rule_len, W.end());
    Term d = rule.lhs;
    Position pos;
    if (!b.empty()) {
        d = Term::app(*lv.dot, {d, word_to_term(sig, *lv.dot, std::nullopt, b)});
        pos = pos.child(1);
    }
    for (std::size_t k = off; k-- > 0;) {
        d = Term::app(*lv.dot, {Term::app(W[k]), d});
        pos = prepend(2, pos);
    }
    EquivTrace pre = invert(canonical_trace(P, sys.apm.split, ParadigmKind::Linear, d).trace);
    RewritingStep st = make_step(pre, Context::at(sig, d, pos), rule, {});
    if (st.source != key) return std::nullopt;
    return st;
}

std::optional<RewritingStep> group_step_at(const System& sys, const GroupView& gv,
                                           const Term& key, std::size_t rule_idx, int eps,
                                           const SignedWord& u, const SignedWord& v) {
    const CartesianPolygraph& P = sys.apm.theory;
    const Signature& sig = *P.signature;
    const GroundRule& rule = sys.apm.rules[rule_idx];
    if (syntactic_policy(sys.apm.policy)) {
        if (eps != 1) return std::nullopt; // inverse applications need the pre part
        SignedWord m = group_reduce(leaf_signature(sig, rule.lhs));
        SignedWord expected = concat(u, concat(m, v));
        if (raw_signed(gv, key) != expected) return std::nullopt;
        for (const auto& [pos, sub] : enumerate_positions(key)) {
            if (sub != rule.lhs) continue;
            Interval r = raw_range(gv, key, pos);
            if (r.lo != u.size() || r.hi != u.size() + m.size()) continue;
            return make_step({}, Context::at(sig, key, pos), rule, {});
        }
        return std::nullopt;
    }
    Term M = eps == 1 ? rule.lhs : Term::app(gv.inv, {rule.lhs});
    Term d;
    Position pos;
    if (u.empty() && v.empty()) {
        d = M;
    } else if (u.empty()) {
        d = Term::app(gv.mu, {M, signed_word_to_term(sig, v)});
        pos = pos.child(1);
    } else if (v.empty()) {
        d = Term::app(gv.mu, {signed_word_to_term(sig, u), M});
        pos = pos.child(2);
    } else {
        d = Term::app(gv.mu,
                      {Term::app(gv.mu, {signed_word_to_term(sig, u), M}), signed_word_to_term(sig, v)});
        pos = pos.child(1).child(2);
    }
    if (eps == -1) pos = pos.child(1);
    EquivTrace pre = invert(canonical_trace(P, sys.apm.split, ParadigmKind::Group, d).trace);
    RewritingStep st = make_step(pre, Context::at(sig, d, pos), rule, {});
    if (st.source != key) return std::nullopt;
    return st;
}

// ---------------------------------------------------------------------------
// candidate collection with deduplication and a stable order
// ---------------------------------------------------------------------------

using StepSig = std::tuple<std::string, Term, std::vector<std::uint32_t>>;

StepSig step_sig(const RewritingStep& s) {
    return {s.rule.name, display_of(s), s.ctx.hole_position().path};
}

struct Collector {
    const System& sys;
    const PositiveStrategy& sigma;
    std::set<std::tuple<Term, StepSig, StepSig>> seen;
    std::vector<std::pair<std::tuple<Term, StepSig, StepSig>, CriticalBranching>> items;

    void add(const Term& src, RewritingStep a, RewritingStep b) {
        if (!is_positive(sys, sigma, a) || !is_positive(sys, sigma, b)) return;
        StepSig sa = step_sig(a), sb = step_sig(b);
        if (sa == sb) return; // the same application twice
        if (sb < sa) {
            std::swap(a, b);
            std::swap(sa, sb);
        }
        std::tuple<Term, StepSig, StepSig> sig{src, sa, sb};
        if (!seen.insert(sig).second) return;
        Branching br;
        br.left.steps.push_back(std::move(a));
        br.right.steps.push_back(std::move(b));
        items.emplace_back(std::move(sig), CriticalBranching{std::move(br), src});
    }

    std::vector<CriticalBranching> take() {
        std::sort(items.begin(), items.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<CriticalBranching> out;
        out.reserve(items.size());
        for (auto& [k, v] : items) out.push_back(std::move(v));
        return out;
    }
};

// proper suffix-of-w1 = prefix-of-w2 overlaps and factor inclusions shared by
// the word paradigms
template <class Wd, class Emit>
void scan_word_pairs(const std::vector<Wd>& words, Emit emit) {
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = 0; j < words.size(); ++j) {
            const Wd& wi = words[i];
            const Wd& wj = words[j];
            if (wi.empty() || wj.empty()) continue;
            for (std::size_t k = 1; k < wi.size(); ++k) { // wj hangs over the right end
                if (k + wj.size() <= wi.size()) continue;
                if (!std::equal(wi.begin() + k, wi.end(), wj.begin())) continue;
                Wd W(wi.begin(), wi.begin() + k);
                W.insert(W.end(), wj.begin(), wj.end());
                emit(W, i, std::size_t{0}, j, k);
            }
            if (wj.size() > wi.size()) continue;
            for (std::size_t o = 0; o + wj.size() <= wi.size(); ++o) { // wj inside wi
                if (i == j && o == 0 && wj.size() == wi.size()) continue;
                if (!std::equal(wj.begin(), wj.end(), wi.begin() + o)) continue;
                emit(wi, i, std::size_t{0}, j, o);
            }
        }
    }
}

void critical_string(const System& sys, const PositiveStrategy& sigma, Collector& col) {
    const Signature& sig = *sys.apm.theory.signature;
    SymbolId mu = sig.symbol("mu");
    std::optional<SymbolId> unit = sig.find_symbol("e");
    std::vector<Word> words;
    for (const GroundRule& r : sys.apm.rules) words.push_back(assoc_flatten(sig, mu, unit, r.lhs));
    (void)sigma;
    scan_word_pairs(words, [&](const Word& W, std::size_t i, std::size_t oi, std::size_t j,
                               std::size_t oj) {
        Term key = key_of(sys, word_to_term(sig, mu, unit, W));
        auto a = string_step_at(sys, mu, unit, W, key, i, oi);
        auto b = string_step_at(sys, mu, unit, W, key, j, oj);
        if (a && b) col.add(key, std::move(*a), std::move(*b));
    });
}

void critical_linear(const System& sys, const PositiveStrategy& sigma, Collector& col) {
    const Signature& sig = *sys.apm.theory.signature;
    LinearView lv = linear_view(sig);
    std::vector<Word> words;
    for (const GroundRule& r : sys.apm.rules) {
        Polynomial p = linear_canonical(sig, r.lhs);
        if (p.monomial_count() != 1 || p.terms().begin()->second != 1 ||
            p.terms().begin()->first.empty())
            fail(ErrorCode::NotLeftMonomial,
                 "rule " + r.name + ": critical branchings need a left-monomial source");
        words.push_back(p.terms().begin()->first);
    }
    (void)sigma;
    scan_word_pairs(words, [&](const Word& W, std::size_t i, std::size_t oi, std::size_t j,
                               std::size_t oj) {
        Term t = W.size() == 1 ? Term::app(W[0]) : word_to_term(sig, *lv.dot, std::nullopt, W);
        Term key = key_of(sys, t);
        auto a = linear_step_at(sys, lv, W, key, i, oi, words[i].size());
        auto b = linear_step_at(sys, lv, W, key, j, oj, words[j].size());
        if (a && b) col.add(key, std::move(*a), std::move(*b));
    });
}

void critical_group(const System& sys, const PositiveStrategy& sigma, Collector& col) {
    const Signature& sig = *sys.apm.theory.signature;
    GroupView gv = group_view(sig);
    struct Variant {
        std::size_t rule;
        int eps;
        SignedWord m;
    };
    std::vector<Variant> vars;
    for (std::size_t r = 0; r < sys.apm.rules.size(); ++r) {
        SignedWord m0 = group_reduce(leaf_signature(sig, sys.apm.rules[r].lhs));
        if (m0.empty()) continue;
        vars.push_back({r, +1, m0});
        vars.push_back({r, -1, inverse(m0)});
    }
    (void)sigma;
    auto emit = [&](const SignedWord& W0, const Variant& va, const SignedWord& ua,
                    const SignedWord& vaw, const Variant& vb, const SignedWord& ub,
                    const SignedWord& vbw) {
        Term key = key_of(sys, signed_word_to_term(sig, W0));
        auto a = group_step_at(sys, gv, key, va.rule, va.eps, ua, vaw);
        auto b = group_step_at(sys, gv, key, vb.rule, vb.eps, ub, vbw);
        if (a && b) col.add(key, std::move(*a), std::move(*b));
    };
    for (const Variant& va : vars) {
        for (const Variant& vb : vars) {
            const SignedWord& m1 = va.m;
            const SignedWord& m2 = vb.m;
            for (std::size_t k = 1; k < m1.size(); ++k) { // proper overlap at offset k
                if (k + m2.size() <= m1.size()) continue;
                if (!std::equal(m1.begin() + k, m1.end(), m2.begin())) continue;
                SignedWord W0(m1.begin(), m1.begin() + k);
                W0.insert(W0.end(), m2.begin(), m2.end());
                if (group_reduce(W0) != W0) continue;
                emit(W0, va, {}, SignedWord(W0.begin() + m1.size(), W0.end()), vb,
                     SignedWord(W0.begin(), W0.begin() + k), {});
            }
            if (m2.size() <= m1.size()) { // inclusion
                for (std::size_t o = 0; o + m2.size() <= m1.size(); ++o) {
                    if (&va == &vb && o == 0 && m2.size() == m1.size()) continue;
                    if (!std::equal(m2.begin(), m2.end(), m1.begin() + o)) continue;
                    emit(m1, va, {}, {}, vb, SignedWord(m1.begin(), m1.begin() + o),
                         SignedWord(m1.begin() + o + m2.size(), m1.end()));
                }
            }
            // seam cancellation between the end of m1 and the start of m2
            std::size_t c = 0;
            while (c < m1.size() && c < m2.size() && m1[m1.size() - 1 - c] == inverse(m2[c])) ++c;
            if (c >= 1) {
                SignedWord W0(m1.begin(), m1.end() - c);
                W0.insert(W0.end(), m2.begin() + c, m2.end());
                emit(W0, va, {}, m2, vb, m1, {});
            }
        }
    }
}

void critical_generic(const System& sys, const PositiveStrategy& sigma, Collector& col,
                      bool& truncated) {
    const CartesianPolygraph& P = sys.apm.theory;
    const Signature& sig = *P.signature;
    (void)sigma;
    for (std::size_t i = 0; i < sys.apm.rules.size(); ++i) {
        const GroundRule& ri = sys.apm.rules[i];
        ClassEnumeration cls =
            enumerate_class(P, sys.apm.split.unoriented, ri.lhs, sys.bounds.max_class);
        if (!cls.complete) truncated = true;
        for (std::size_t mi = 0; mi < cls.members.size(); ++mi) {
            if (syntactic_policy(sys.apm.policy) && mi != 0) break;
            const Term& M = cls.members[mi];
            for (const auto& [p, sub] : enumerate_positions(M)) {
                for (std::size_t j = 0; j < sys.apm.rules.size(); ++j) {
                    if (sub != sys.apm.rules[j].lhs) continue;
                    if (mi == 0 && p.is_root() && i == j) continue;
                    RewritingStep a = make_step(invert(cls.traces[mi]),
                                                Context::at(sig, ri.lhs, Position{}), ri, {});
                    RewritingStep b =
                        make_step({}, Context::at(sig, M, p), sys.apm.rules[j], {});
                    col.add(key_of(sys, ri.lhs), std::move(a), std::move(b));
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// joinability
// ---------------------------------------------------------------------------

struct JoinCache {
    std::map<Term, std::vector<std::pair<RewritingStep, Term>>> out;
};

const std::vector<std::pair<RewritingStep, Term>>& positive_out(const System& sys,
                                                                const PositiveStrategy& sigma,
                                                                const Term& key,
                                                                JoinCache& cache) {
    auto it = cache.out.find(key);
    if (it != cache.out.end()) return it->second;
    std::vector<std::pair<RewritingStep, Term>> res;
    for (RewritingStep& st : find_redexes(sys, key)) {
        if (!is_positive(sys, sigma, st)) continue;
        Term tk = key_of(sys, st.target);
        res.emplace_back(std::move(st), std::move(tk));
    }
    return cache.out.emplace(key, std::move(res)).first->second;
}

struct Closure {
    std::vector<Term> keys;
    std::map<Term, std::size_t> index;
    std::vector<int> parent;
    std::vector<RewritingStep> via; // step from the parent key into this node
    std::vector<std::size_t> depth;
    std::vector<bool> irreducible;
    bool complete = true;
};

// breadth-first σ-positive closure; when `meet_in` is given, stops as soon as
// a node key also lives in that closure (reported through `met`)
Closure positive_closure(const System& sys, const PositiveStrategy& sigma, const Term& root,
                         std::size_t depth_limit, std::size_t node_cap, JoinCache& cache,
                         const Closure* meet_in, std::optional<std::size_t>* met) {
    Closure c;
    c.keys.push_back(root);
    c.index[root] = 0;
    c.parent.push_back(-1);
    c.via.push_back({});
    c.depth.push_back(0);
    c.irreducible.push_back(false);
    if (meet_in && meet_in->index.count(root)) {
        if (met) *met = 0;
        return c;
    }
    for (std::size_t idx = 0; idx < c.keys.size(); ++idx) {
        const auto& steps = positive_out(sys, sigma, c.keys[idx], cache);
        c.irreducible[idx] = steps.empty();
        for (const auto& [st, tk] : steps) {
            if (c.index.count(tk)) continue;
            if (c.depth[idx] >= depth_limit || c.keys.size() >= node_cap) {
                c.complete = false;
                continue;
            }
            c.index[tk] = c.keys.size();
            c.keys.push_back(tk);
            c.parent.push_back(static_cast<int>(idx));
            c.via.push_back(st);
            c.depth.push_back(c.depth[idx] + 1);
            c.irreducible.push_back(false);
            if (meet_in && meet_in->index.count(tk)) {
                if (met) *met = c.keys.size() - 1;
                return c;
            }
        }
    }
    return c;
}

RewritingPath path_to(const Closure& c, std::size_t idx) {
    RewritingPath p;
    for (int cur = static_cast<int>(idx); cur > 0; cur = c.parent[cur])
        p.steps.push_back(c.via[cur]);
    std::reverse(p.steps.begin(), p.steps.end());
    return p;
}

// equivalence trace between two terms through the full axiom set, found by a
// bounded class search from either end
std::optional<EquivTrace> class_bridge(const CartesianPolygraph& P, const Term& a, const Term& b,
                                       std::size_t bound) {
    if (a == b) return EquivTrace{};
    ClassEnumeration ca = enumerate_class(P, P.axioms, a, bound);
    for (std::size_t i = 0; i < ca.members.size(); ++i)
        if (ca.members[i] == b) return ca.traces[i];
    ClassEnumeration cb = enumerate_class(P, P.axioms, b, bound);
    for (std::size_t i = 0; i < cb.members.size(); ++i)
        if (cb.members[i] == a) return invert(cb.traces[i]);
    return std::nullopt;
}

ClosingDiagram make_diagram(const System& sys, const Closure& left, std::size_t li,
                            const Closure& right, std::size_t ri, const Term& tl_key,
                            const Term& tr_key, const EquivTrace& key_link) {
    ClosingDiagram d;
    d.a2 = path_to(left, li);
    d.b2 = path_to(right, ri);
    Term ta = d.a2.empty() ? tl_key : d.a2.steps.back().target;
    Term tb = d.b2.empty() ? tr_key : d.b2.steps.back().target;
    EquivTrace e2 = key_bridge(sys, ta, left.keys[li]);
    e2.insert(e2.end(), key_link.begin(), key_link.end());
    EquivTrace back = invert(key_bridge(sys, tb, right.keys[ri]));
    e2.insert(e2.end(), back.begin(), back.end());
    d.e2 = std::move(e2);
    return d;
}

JoinVerdict join_impl(const System& sys, const PositiveStrategy& sigma, const Branching& b,
                      std::size_t depth, JoinCache& cache) {
    JoinVerdict v;
    Term src_left = !b.left.empty() ? b.left.steps.front().source : Term{};
    if (src_left.empty()) {
        v.status = ConfluenceStatus::Confluent;
        v.diagram = ClosingDiagram{};
        v.detail = "empty branching";
        return v;
    }
    Term end_left = !b.left.empty() ? b.left.steps.back().target : src_left;
    Term src_right = !b.right.empty() ? b.right.steps.front().source
                                      : apply_trace(src_left, b.equiv);
    Term end_right = !b.right.empty() ? b.right.steps.back().target : src_right;
    Term tl = key_of(sys, end_left);
    Term tr = key_of(sys, end_right);

    std::size_t cap = std::min<std::size_t>(sys.bounds.max_terms, 512);
    Closure left = positive_closure(sys, sigma, tl, depth, cap, cache, nullptr, nullptr);
    std::optional<std::size_t> met;
    Closure right = positive_closure(sys, sigma, tr, depth, cap, cache, &left, &met);

    if (met) {
        std::size_t li = left.index.at(right.keys[*met]);
        v.status = ConfluenceStatus::Confluent;
        v.diagram = make_diagram(sys, left, li, right, *met, tl, tr, {});
        v.detail = tl == tr ? "the two targets already share a class"
                            : "joined after " + std::to_string(v.diagram->a2.length()) + "+" +
                                  std::to_string(v.diagram->b2.length()) + " positive steps";
        return v;
    }

    // no shared key; for generic theories keys under-merge, so look for a
    // cross-class equivalence with a replayable trace
    bool cross_exact = sys.paradigm != ParadigmKind::Generic;
    if (sys.paradigm == ParadigmKind::Generic &&
        left.keys.size() * right.keys.size() <= 256) {
        for (std::size_t li = 0; li < left.keys.size(); ++li) {
            for (std::size_t ri = 0; ri < right.keys.size(); ++ri) {
                auto link = class_bridge(sys.apm.theory, left.keys[li], right.keys[ri],
                                         sys.bounds.max_class);
                if (!link) {
                    Tri eq = equiv_modulo(sys.apm.theory, sys.paradigm, left.keys[li],
                                          right.keys[ri], sys.bounds);
                    if (eq != Tri::False) cross_exact = false;
                    continue;
                }
                v.status = ConfluenceStatus::Confluent;
                v.diagram = make_diagram(sys, left, li, right, ri, tl, tr, *link);
                v.detail = "joined through an equivalence bridge after " +
                           std::to_string(v.diagram->a2.length()) + "+" +
                           std::to_string(v.diagram->b2.length()) + " positive steps";
                return v;
            }
        }
    } else if (sys.paradigm == ParadigmKind::Generic) {
        cross_exact = false;
    }

    if (left.complete && right.complete && cross_exact) {
        v.status = ConfluenceStatus::NonConfluent;
        std::set<Term> wit;
        for (std::size_t i = 0; i < left.keys.size(); ++i)
            if (left.irreducible[i]) wit.insert(left.keys[i]);
        for (std::size_t i = 0; i < right.keys.size(); ++i)
            if (right.irreducible[i]) wit.insert(right.keys[i]);
        for (const Term& w : wit) {
            if (v.witnesses.size() >= 16) break;
            v.witnesses.push_back(w);
        }
        v.detail = "both positive closures are complete (" + std::to_string(left.keys.size()) +
                   " and " + std::to_string(right.keys.size()) + " classes) and never meet";
        if (sys.paradigm == ParadigmKind::Group)
            v.detail += "; certificate relative to the insertion bound";
        return v;
    }
    v.status = ConfluenceStatus::Unknown;
    v.detail = "positive closures did not meet within depth " + std::to_string(depth);
    if (!left.complete || !right.complete) v.detail += " (search truncated)";
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// public surface
// ---------------------------------------------------------------------------

const char* branching_class_name(BranchingClass k) {
    switch (k) {
    case BranchingClass::Trivial: return "TRIVIAL";
    case BranchingClass::InclusionIndependent: return "INCLUSION_INDEPENDENT";
    case BranchingClass::Orthogonal: return "ORTHOGONAL";
    case BranchingClass::NonOrthogonal: return "NON_ORTHOGONAL";
    }
    return "?";
}

const char* completeness_name(Completeness c) {
    return c == Completeness::Exact ? "EXACT" : "UNDER_APPROXIMATE";
}

const char* confluence_status_name(ConfluenceStatus s) {
    switch (s) {
    case ConfluenceStatus::Confluent: return "CONFLUENT";
    case ConfluenceStatus::NonConfluent: return "NON_CONFLUENT";
    case ConfluenceStatus::Unknown: return "UNKNOWN";
    }
    return "?";
}

BranchingClass classify_local_branching(const System& sys, const Branching& b) {
    if (b.left.length() != 1 || b.equiv.size() + b.right.length() != 1)
        fail(ErrorCode::NotLocal,
             "a local branching is one step against one step or one axiom application");
    const RewritingStep& a = b.left.steps.front();
    Term u2;
    try {
        u2 = apply_trace(a.source, b.equiv);
    } catch (const Error&) {
        fail(ErrorCode::NotLocal, "the equivalence trace does not start at the left source");
    }
    if (!b.right.empty() && b.right.steps.front().source != u2)
        fail(ErrorCode::NotLocal, "the two sides are not coinitial");

    const Signature& sig = *sys.apm.theory.signature;

    if (b.right.empty()) { // step against axiom application
        if (!a.pre.empty()) return BranchingClass::NonOrthogonal;
        return Position::disjoint(a.ctx.hole_position(), b.equiv.front().pos)
                   ? BranchingClass::Orthogonal
                   : BranchingClass::NonOrthogonal;
    }

    const RewritingStep& c = b.right.steps.front();
    Term da = display_of(a);
    Term dc = display_of(c);
    const Position& pa = a.ctx.hole_position();
    const Position& pc = c.ctx.hole_position();
    if (da == dc && pa == pc && a.rule.name == c.rule.name && a.rule.lhs == c.rule.lhs &&
        a.rule.rhs == c.rule.rhs)
        return BranchingClass::Trivial;

    auto shape = [&](bool comparable, Interval fa, Interval fc) {
        if (!comparable) return BranchingClass::NonOrthogonal;
        if (!intervals_disjoint(fa, fc)) return BranchingClass::NonOrthogonal;
        if (da == dc && Position::disjoint(pa, pc)) return BranchingClass::Orthogonal;
        return BranchingClass::InclusionIndependent;
    };

    switch (sys.paradigm) {
    case ParadigmKind::String: {
        SymbolId mu = sig.symbol("mu");
        std::optional<SymbolId> unit = sig.find_symbol("e");
        try {
            if (assoc_flatten(sig, mu, unit, da) != assoc_flatten(sig, mu, unit, dc))
                return BranchingClass::NonOrthogonal;
            std::size_t oa = letters_before(mu, unit, da, pa);
            std::size_t oc = letters_before(mu, unit, dc, pc);
            Interval fa{oa, oa + letter_count(mu, unit, a.rule.lhs)};
            Interval fc{oc, oc + letter_count(mu, unit, c.rule.lhs)};
            return shape(true, fa, fc);
        } catch (const Error&) {
            return BranchingClass::NonOrthogonal;
        }
    }
    case ParadigmKind::Group: {
        GroupView gv = group_view(sig);
        SignedWord wa = raw_signed(gv, da);
        if (wa != raw_signed(gv, dc)) return BranchingClass::NonOrthogonal;
        Interval fa = raw_range(gv, da, pa);
        Interval fc = raw_range(gv, dc, pc);
        if (intervals_disjoint(fa, fc)) {
            // adjacent redexes whose seam cancels still interfere
            const Interval& l = fa.lo <= fc.lo ? fa : fc;
            const Interval& r = fa.lo <= fc.lo ? fc : fa;
            if (l.hi == r.lo && l.hi > 0 && l.hi < wa.size() &&
                wa[l.hi - 1] == inverse(wa[l.hi]))
                return BranchingClass::NonOrthogonal;
        }
        return shape(true, fa, fc);
    }
    case ParadigmKind::Linear: {
        LinearView lv = linear_view(sig);
        if (da == dc) {
            if (Position::disjoint(pa, pc)) return BranchingClass::Orthogonal;
            return BranchingClass::NonOrthogonal;
        }
        try {
            std::set<Word> sa = support_of(sig, monomial_container(lv, da, pa));
            std::set<Word> sc = support_of(sig, monomial_container(lv, dc, pc));
            for (const Word& w : sa)
                if (sc.count(w)) return BranchingClass::NonOrthogonal;
            return BranchingClass::InclusionIndependent;
        } catch (const Error&) {
            return BranchingClass::NonOrthogonal;
        }
    }
    case ParadigmKind::Generic:
    default:
        if (da != dc) return BranchingClass::NonOrthogonal;
        if (Position::disjoint(pa, pc)) return BranchingClass::Orthogonal;
        return BranchingClass::NonOrthogonal;
    }
}

CriticalSet critical_branchings(const System& sys, const PositiveStrategy& sigma) {
    Collector col{sys, sigma, {}, {}};
    CriticalSet cs;
    switch (sys.paradigm) {
    case ParadigmKind::String:
        critical_string(sys, sigma, col);
        cs.completeness = Completeness::Exact;
        break;
    case ParadigmKind::Linear:
        critical_linear(sys, sigma, col);
        cs.completeness = Completeness::Exact;
        break;
    case ParadigmKind::Group:
        critical_group(sys, sigma, col);
        cs.completeness = Completeness::UnderApproximate;
        break;
    case ParadigmKind::Generic:
    default: {
        bool truncated = false;
        critical_generic(sys, sigma, col, truncated);
        cs.completeness = sys.apm.theory.axioms.empty() ? Completeness::Exact
                                                        : Completeness::UnderApproximate;
        break;
    }
    }
    cs.items = col.take();
    return cs;
}

JoinVerdict joinable_modulo(const System& sys, const PositiveStrategy& sigma, const Branching& b,
                            std::size_t depth) {
    JoinCache cache;
    return join_impl(sys, sigma, b, depth, cache);
}

ConfluenceReport local_confluence_report(const System& sys, const PositiveStrategy& sigma) {
    ConfluenceReport rep;
    rep.quasi_termination = termination_check(sys, default_seeds(sys));
    rep.positive_confluence = positive_confluence_check(sys, sigma);

    CriticalSet cs = critical_branchings(sys, sigma);
    rep.enumeration = cs.completeness;

    JoinCache cache;
    for (CriticalBranching& cb : cs.items) {
        BranchingReportEntry e;
        e.verdict = join_impl(sys, sigma, cb.branching, sys.bounds.join_depth, cache);
        e.cls = classify_local_branching(sys, cb.branching);
        e.critical = std::move(cb);
        rep.branchings.push_back(std::move(e));
    }

    // with a syntactic policy the leading equivalence is not part of the
    // step, so branchings of a rule against a single axiom application need
    // their own closings; one join per rule covers every axiom choice
    if (syntactic_policy(sys.apm.policy)) {
        const Signature& sig = *sys.apm.theory.signature;
        for (const GroundRule& r : sys.apm.rules) {
            auto apps = groundify_matches(sys.apm.theory, r.lhs);
            if (apps.empty()) continue;
            const GroundAxiomInstance& g = apps.front();
            RewritingStep a = make_step({}, Context::at(sig, r.lhs, Position{}), r, {});
            if (!is_positive(sys, sigma, a)) continue;
            Branching br;
            br.left.steps.push_back(std::move(a));
            br.equiv.push_back(
                EquivStep{g.ctx.hole_position(), g.axiom, g.forward, g.from, g.to});
            BranchingReportEntry e;
            e.verdict = join_impl(sys, sigma, br, sys.bounds.join_depth, cache);
            e.cls = classify_local_branching(sys, br);
            e.critical = CriticalBranching{std::move(br), key_of(sys, r.lhs)};
            rep.branchings.push_back(std::move(e));
        }
    }

    const BranchingReportEntry* bad = nullptr;
    const BranchingReportEntry* open = nullptr;
    for (const auto& e : rep.branchings) {
        if (e.verdict.status == ConfluenceStatus::NonConfluent && !bad) bad = &e;
        if (e.verdict.status != ConfluenceStatus::Confluent && !open) open = &e;
    }
    if (bad) {
        rep.status = ConfluenceStatus::NonConfluent;
        rep.detail = "the branching over " + native(sys, bad->critical.source) +
                     " has no positive closing: " + bad->verdict.detail;
        return rep;
    }
    if (open) {
        rep.status = ConfluenceStatus::Unknown;
        rep.detail = "the branching over " + native(sys, open->critical.source) +
                     " did not close within the bounds";
        return rep;
    }
    std::string closed = "all " + std::to_string(rep.branchings.size()) +
                         " critical branchings close positively";
    if (cs.completeness != Completeness::Exact) {
        rep.status = ConfluenceStatus::Unknown;
        rep.detail = closed + ", but the enumeration is an under-approximation";
        return rep;
    }
    if (sigma.kind == StrategyKind::Full) {
        rep.status = ConfluenceStatus::Confluent;
        rep.detail = closed + "; the full strategy discharges the termination and "
                              "positive-confluence preconditions";
        return rep;
    }
    bool term_ok = sys.paradigm == ParadigmKind::Linear
                       ? rep.quasi_termination.kind == TerminationKind::Terminating
                       : rep.quasi_termination.kind == TerminationKind::Terminating ||
                             rep.quasi_termination.kind == TerminationKind::QuasiTerminating;
    bool pos_ok = rep.positive_confluence.verdict == PositiveVerdict::HoldsOnSample;
    if (term_ok && pos_ok) {
        rep.status = ConfluenceStatus::Confluent;
        rep.detail = closed + "; quasi-termination and sampled positive confluence hold";
        return rep;
    }
    rep.status = ConfluenceStatus::Unknown;
    if (!term_ok)
        rep.detail = closed + ", but the " +
                     std::string(sys.paradigm == ParadigmKind::Linear ? "termination"
                                                                      : "quasi-termination") +
                     " precondition fails (" +
                     termination_kind_name(rep.quasi_termination.kind) + ")";
    else
        rep.detail = closed + ", but positive confluence was not established (" +
                     positive_verdict_name(rep.positive_confluence.verdict) + ")";
    return rep;
}

ConfluenceReport newman_confluence_report(const System& sys, const PositiveStrategy& sigma,
                                          const std::vector<Term>& seeds) {
    ConfluenceReport rep = local_confluence_report(sys, sigma);
    std::vector<Term> s = seeds.empty() ? default_seeds(sys) : seeds;
    rep.quasi_termination = termination_check(sys, s);
    if (rep.status == ConfluenceStatus::NonConfluent) return rep;
    bool qt = rep.quasi_termination.kind == TerminationKind::Terminating ||
              rep.quasi_termination.kind == TerminationKind::QuasiTerminating;
    if (!qt) {
        rep.status = ConfluenceStatus::Unknown;
        rep.detail = "the Newman argument needs quasi-termination on the seeds (" +
                     std::string(termination_kind_name(rep.quasi_termination.kind)) + ")";
        return rep;
    }
    if (rep.status != ConfluenceStatus::Confluent) return rep;

    // validate the conclusion on sampled non-local branchings
    JoinCache cache;
    ReachabilityGraph g = reachability(sys, s);
    std::size_t checked = 0;
    for (std::size_t n = 0; n < g.keys.size() && checked < sys.bounds.sample_cap; ++n) {
        std::vector<const RewritingStep*> pos;
        for (const ReachEdge& e : g.out[n])
            if (is_positive(sys, sigma, e.step)) pos.push_back(&e.step);
        if (pos.size() < 2) continue;
        for (std::size_t k = 1; k < pos.size() && k <= 3 && checked < sys.bounds.sample_cap;
             ++k) {
            Branching br;
            br.left.steps.push_back(*pos[0]);
            // every other pass, stretch the left side one positive step further
            if (checked % 2 == 1) {
                const auto& ext =
                    positive_out(sys, sigma, key_of(sys, pos[0]->target), cache);
                if (!ext.empty()) br.left.steps.push_back(ext.front().first);
            }
            br.right.steps.push_back(*pos[k]);
            JoinVerdict v = join_impl(sys, sigma, br, sys.bounds.join_depth, cache);
            ++checked;
            if (v.status == ConfluenceStatus::NonConfluent) {
                rep.status = ConfluenceStatus::NonConfluent;
                rep.detail = "a sampled branching over " + native(sys, g.keys[n]) +
                             " has no positive closing";
                return rep;
            }
            if (v.status == ConfluenceStatus::Unknown) {
                rep.status = ConfluenceStatus::Unknown;
                rep.detail = "a sampled branching over " + native(sys, g.keys[n]) +
                             " did not close within the bounds";
                return rep;
            }
        }
    }
    rep.detail = "locally confluent and quasi-terminating on the seeds; " +
                 std::to_string(checked) + " sampled branchings close";
    return rep;
}

std::string QuotientPresentation::render() const {
    std::string out = "<";
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) out += ",";
        out += generators[i];
    }
    out += " | ";
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (i) out += ", ";
        out += rules[i].lhs + " => " + rules[i].rhs;
    }
    out += ">";
    return out;
}

QuotientPresentation quotient_system(const System& sys, const PositiveStrategy& sigma) {
    const Signature& sig = *sys.apm.theory.signature;
    QuotientPresentation qp;
    for (SymbolId c : sys.apm.constants) qp.generators.push_back(sig.op(c).name);
    for (const GroundRule& r : sys.apm.rules) {
        QuotientPresentation::Rule qr;
        qr.name = r.name;
        qr.lhs = native(sys, r.lhs);
        qr.rhs = native(sys, r.rhs);
        try {
            RewritingStep root = make_step({}, Context::at(sig, r.lhs, Position{}), r, {});
            qr.positive = is_positive(sys, sigma, root);
        } catch (const Error&) {
            qr.positive = false;
        }
        qp.rules.push_back(std::move(qr));
    }
    return qp;
}

} // namespace apm
