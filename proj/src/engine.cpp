#include "apm/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "apm/errors.hpp"

namespace apm {

namespace {

// nodes bigger than this are never expanded; they only arise on divergent
// systems, where the graph is already doomed to be incomplete
constexpr std::size_t kExpandSizeGuard = 1024;

} // namespace

// ---------------------------------------------------------------------------
// System assembly
// ---------------------------------------------------------------------------

AlgebraicPolygraphModulo make_apm(CartesianPolygraph theory, std::vector<SymbolId> constants,
                                  std::vector<GroundRule> rules, StepPolicy policy) {
    AlgebraicPolygraphModulo apm;
    apm.split = modulo_split(theory);
    const Signature& sig = *theory.signature;
    for (SymbolId c : constants)
        if (!sig.op(c).is_constant())
            fail(ErrorCode::ArityMismatch, "generator '" + sig.op(c).name + "' is not a constant");
    for (const GroundRule& r : rules) {
        if (!term_variables(r.lhs).empty() || !term_variables(r.rhs).empty())
            fail(ErrorCode::MalformedStep, "rule '" + r.name + "' has open sides");
        SortId sl = typecheck_term(sig, r.lhs);
        SortId sr = typecheck_term(sig, r.rhs);
        if (sl != sr)
            fail(ErrorCode::SortMismatch, "rule '" + r.name + "' relates sorts '" +
                                              sig.sort_info(sl).name + "' and '" + sig.sort_info(sr).name + "'");
    }
    apm.theory = std::move(theory);
    apm.constants = std::move(constants);
    apm.rules = std::move(rules);
    apm.policy = policy;
    return apm;
}

const char* policy_name(StepPolicy p) {
    switch (p) {
    case StepPolicy::R: return "R";
    case StepPolicy::EPR: return "EPR";
    case StepPolicy::RPE: return "RPE";
    case StepPolicy::EPRE: return "EPRE";
    }
    return "?";
}

const char* paradigm_name(ParadigmKind p) {
    switch (p) {
    case ParadigmKind::String: return "string";
    case ParadigmKind::Linear: return "linear";
    case ParadigmKind::Group: return "group";
    case ParadigmKind::Generic: return "generic";
    }
    return "?";
}

std::vector<Term> default_seeds(const System& sys) {
    std::vector<Term> out;
    auto push = [&](const Term& t) {
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    };
    for (const GroundRule& r : sys.apm.rules) {
        push(r.lhs);
        push(r.rhs);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Step discovery
// ---------------------------------------------------------------------------

namespace {

void syntactic_steps(const System& sys, const Term& t, const EquivTrace& pre,
                     std::vector<RewritingStep>& out) {
    const Signature& sig = *sys.apm.theory.signature;
    for (const auto& [pos, sub] : enumerate_positions(t)) {
        for (const GroundRule& r : sys.apm.rules) {
            if (sub != r.lhs) continue;
            out.push_back(make_step(pre, Context::at(sig, t, pos), r, {}));
        }
    }
}

/// Class-member scan shared by the generic, string and linear searches.
void class_scan_steps(const System& sys, const TracedTerm& canon, const ClassEnumeration& cls,
                      std::vector<RewritingStep>& out) {
    for (std::size_t i = 0; i < cls.members.size(); ++i) {
        EquivTrace pre = canon.trace;
        pre.insert(pre.end(), cls.traces[i].begin(), cls.traces[i].end());
        syntactic_steps(sys, cls.members[i], pre, out);
    }
}

/// Number of letters strictly left of the subtree at `pos` in a µ-shaped
/// arrangement (units do not occur in class members of the canonical form).
std::size_t leaf_offset(SymbolId mu, const Term& t, const Position& pos) {
    std::size_t off = 0;
    Term cur = t;
    auto leaves = [&](const Term& s) {
        std::deque<Term> stack{s};
        std::size_t n = 0;
        while (!stack.empty()) {
            Term x = stack.front();
            stack.pop_front();
            if (x.is_app() && x.symbol() == mu) {
                stack.push_back(x.args()[0]);
                stack.push_back(x.args()[1]);
            } else {
                ++n;
            }
        }
        return n;
    };
    for (std::uint32_t i : pos.path) {
        if (i == 2) off += leaves(cur.args()[0]);
        cur = cur.args()[i - 1];
    }
    return off;
}

void string_steps(const System& sys, const Term& t, std::vector<RewritingStep>& out) {
    const CartesianPolygraph& P = sys.apm.theory;
    const Signature& sig = *P.signature;
    SymbolId mu = sig.symbol("mu");
    std::optional<SymbolId> unit = sig.find_symbol("e");

    TracedTerm canon = canonical_trace(P, sys.apm.split, ParadigmKind::String, t);
    ClassEnumeration cls =
        enumerate_class(P, sys.apm.split.unoriented, canon.result, sys.bounds.max_class);

    // windows already realized by some arrangement in the (possibly cut) class
    std::set<std::pair<std::size_t, std::size_t>> covered; // (rule idx, offset)
    for (std::size_t i = 0; i < cls.members.size(); ++i) {
        EquivTrace pre = canon.trace;
        pre.insert(pre.end(), cls.traces[i].begin(), cls.traces[i].end());
        for (const auto& [pos, sub] : enumerate_positions(cls.members[i])) {
            for (std::size_t r = 0; r < sys.apm.rules.size(); ++r) {
                if (sub != sys.apm.rules[r].lhs) continue;
                out.push_back(make_step(pre, Context::at(sig, cls.members[i], pos), sys.apm.rules[r], {}));
                covered.emplace(r, leaf_offset(mu, cls.members[i], pos));
            }
        }
    }

    // the truncated class can miss word occurrences; add one canonically
    // arranged step per missing window
    Word w = assoc_flatten(sig, mu, unit, canon.result);
    for (std::size_t r = 0; r < sys.apm.rules.size(); ++r) {
        const GroundRule& rule = sys.apm.rules[r];
        Word l = assoc_flatten(sig, mu, unit, rule.lhs);
        if (l.empty() || l.size() > w.size()) continue;
        for (std::size_t i = 0; i + l.size() <= w.size(); ++i) {
            if (!std::equal(l.begin(), l.end(), w.begin() + i)) continue;
            if (covered.count({r, i})) continue;
            Word b(w.begin() + i + l.size(), w.end());
            Term core = b.empty() ? rule.lhs
                                  : Term::app(mu, {rule.lhs, word_to_term(sig, mu, unit, b)});
            Position pos;
            if (!b.empty()) pos = pos.child(1);
            Term d = core;
            for (std::size_t k = i; k-- > 0;) {
                d = Term::app(mu, {Term::app(w[k]), d});
                Position shifted;
                shifted = shifted.child(2);
                for (std::uint32_t c : pos.path) shifted = shifted.child(c);
                pos = shifted;
            }
            EquivTrace pre = canon.trace;
            EquivTrace back = invert(canonical_trace(P, sys.apm.split, ParadigmKind::String, d).trace);
            pre.insert(pre.end(), back.begin(), back.end());
            out.push_back(make_step(pre, Context::at(sig, d, pos), rule, {}));
        }
    }
}

void group_steps(const System& sys, const Term& t, std::vector<RewritingStep>& out) {
    const CartesianPolygraph& P = sys.apm.theory;
    const Signature& sig = *P.signature;
    GroupView gv = group_view(sig);

    TracedTerm canon = canonical_trace(P, sys.apm.split, ParadigmKind::Group, t);
    SignedWord w = group_reduce(leaf_signature(sig, t));
    WordExpansion exp = insertion_expansions(w, sys.apm.constants, sys.bounds.insertion_bound);

    using Key = std::tuple<std::size_t, int, SignedWord, SignedWord>;
    std::set<Key> seen;
    std::vector<std::pair<Key, RewritingStep>> found;

    for (std::size_t r = 0; r < sys.apm.rules.size(); ++r) {
        const GroundRule& rule = sys.apm.rules[r];
        SignedWord m0 = group_reduce(leaf_signature(sig, rule.lhs));
        if (m0.empty()) continue;
        for (int eps : {+1, -1}) {
            SignedWord m = eps == 1 ? m0 : inverse(m0);
            for (const SignedWord& wx : exp.words) {
                for (std::size_t i = 0; i <= wx.size(); ++i) {
                    for (std::size_t j = i; j <= wx.size(); ++j) {
                        // shared middle c = wx[i..j) somewhere inside m
                        std::size_t clen = j - i;
                        if (clen > m.size()) continue;
                        for (std::size_t k = 0; k + clen <= m.size(); ++k) {
                            if (!std::equal(wx.begin() + i, wx.begin() + j, m.begin() + k)) continue;
                            SignedWord p(m.begin(), m.begin() + k);
                            SignedWord q(m.begin() + k + clen, m.end());
                            SignedWord u = concat(SignedWord(wx.begin(), wx.begin() + i), inverse(p));
                            SignedWord v = concat(inverse(q), SignedWord(wx.begin() + j, wx.end()));
                            if (group_reduce(u) != u || group_reduce(v) != v) continue;
                            if (group_reduce(concat(u, concat(m, v))) != w) continue;
                            Key key{r, eps, u, v};
                            if (!seen.insert(key).second) continue;

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
                                d = Term::app(gv.mu, {Term::app(gv.mu, {signed_word_to_term(sig, u), M}),
                                                      signed_word_to_term(sig, v)});
                                pos = pos.child(1).child(2);
                            }
                            if (eps == -1) pos = pos.child(1);

                            EquivTrace pre = canon.trace;
                            EquivTrace back =
                                invert(canonical_trace(P, sys.apm.split, ParadigmKind::Group, d).trace);
                            pre.insert(pre.end(), back.begin(), back.end());
                            found.emplace_back(std::move(key),
                                               make_step(pre, Context::at(sig, d, pos), rule, {}));
                        }
                    }
                }
            }
        }
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [k, st] : found) out.push_back(std::move(st));
}

void linear_steps(const System& sys, const Term& t, std::vector<RewritingStep>& out) {
    const CartesianPolygraph& P = sys.apm.theory;
    const Signature& sig = *P.signature;
    LinearView v = linear_view(sig);

    TracedTerm canon = canonical_trace(P, sys.apm.split, ParadigmKind::Linear, t);
    ClassEnumeration cls =
        enumerate_class(P, sys.apm.split.unoriented, canon.result, sys.bounds.max_class);
    class_scan_steps(sys, canon, cls, out);

    Polynomial p = linear_canonical(sig, t);

    // the truncated class can leave monomial occurrences of left-monomial
    // rules unexposed (wide coefficient combs eat the enumeration budget), so
    // add one canonically arranged step per occurrence not yet realized
    std::set<Polynomial> seen_targets;
    for (const RewritingStep& st : out) seen_targets.insert(linear_canonical(sig, st.target));
    bool integral = true;
    for (const auto& [mw, mc] : p.terms())
        if (boost::multiprecision::denominator(mc) != 1) integral = false;
    auto prepend = [](std::uint32_t c, const Position& pos) {
        Position np;
        np = np.child(c);
        for (std::uint32_t x : pos.path) np = np.child(x);
        return np;
    };
    for (const GroundRule& rule : integral ? sys.apm.rules : std::vector<GroundRule>{}) {
        Polynomial lp = linear_canonical(sig, rule.lhs);
        if (lp.monomial_count() != 1) continue;
        const auto& [lw, lc] = *lp.terms().begin();
        if (lc != 1 || lw.empty()) continue;
        for (const auto& [mw, mc] : p.terms()) {
            for (std::size_t i = 0; i + lw.size() <= mw.size(); ++i) {
                if (!std::equal(lw.begin(), lw.end(), mw.begin() + i)) continue;
                Word a(mw.begin(), mw.begin() + i);
                Word b(mw.begin() + i + lw.size(), mw.end());
                if ((!a.empty() || !b.empty()) && !v.dot) continue;
                Polynomial target = p;
                target.add(mw, -mc);
                Polynomial ag = Polynomial::monomial(a) * linear_canonical(sig, rule.rhs) *
                                Polynomial::monomial(b);
                target += ag.scaled(mc);
                if (seen_targets.count(target)) continue;

                Term arr = rule.lhs;
                Position pos;
                if (!b.empty()) {
                    arr = Term::app(*v.dot, {arr, word_to_term(sig, *v.dot, std::nullopt, b)});
                    pos = pos.child(1);
                }
                for (std::size_t k = i; k-- > 0;) {
                    arr = Term::app(*v.dot, {Term::app(mw[k]), arr});
                    pos = prepend(2, pos);
                }
                if (mc != 1) {
                    arr = Term::app(v.act, {coeff_to_term(sig, mc), arr});
                    pos = prepend(2, pos);
                }
                Polynomial rest = p;
                rest.add(mw, -mc);
                Term d = arr;
                if (!rest.is_zero()) {
                    d = Term::app(v.oplus, {arr, polynomial_to_term(sig, rest)});
                    pos = prepend(1, pos);
                }
                EquivTrace pre = canon.trace;
                EquivTrace back =
                    invert(canonical_trace(P, sys.apm.split, ParadigmKind::Linear, d).trace);
                pre.insert(pre.end(), back.begin(), back.end());
                out.push_back(make_step(pre, Context::at(sig, d, pos), rule, {}));
                seen_targets.insert(target);
            }
        }
    }

    // the cycle steps: any rule whose right side matches t exactly can be
    // undone through  g  ❀  -f ⊕ (g ⊕ f)  ⇒  -g ⊕ (g ⊕ f)  ❀  f
    for (const GroundRule& rule : sys.apm.rules) {
        if (linear_canonical(sig, rule.rhs) != p) continue;
        Term d = Term::app(v.oplus, {Term::app(v.oneg, {rule.lhs}),
                                     Term::app(v.oplus, {rule.rhs, rule.lhs})});
        EquivTrace pre = canon.trace;
        EquivTrace back = invert(canonical_trace(P, sys.apm.split, ParadigmKind::Linear, d).trace);
        pre.insert(pre.end(), back.begin(), back.end());
        out.push_back(make_step(pre, Context::at(sig, d, Position{}.child(1).child(1)), rule, {}));
    }
}

} // namespace

std::vector<RewritingStep> find_redexes(const System& sys, const Term& t) {
    std::vector<RewritingStep> out;
    if (sys.apm.policy == StepPolicy::R || sys.apm.policy == StepPolicy::RPE) {
        syntactic_steps(sys, t, {}, out);
        return out;
    }
    switch (sys.paradigm) {
    case ParadigmKind::String:
        string_steps(sys, t, out);
        break;
    case ParadigmKind::Group:
        group_steps(sys, t, out);
        break;
    case ParadigmKind::Linear:
        linear_steps(sys, t, out);
        break;
    case ParadigmKind::Generic: {
        TracedTerm canon = canonical_trace(sys.apm.theory, sys.apm.split, sys.paradigm, t);
        ClassEnumeration cls = enumerate_class(sys.apm.theory, sys.apm.split.unoriented, canon.result,
                                               sys.bounds.max_class);
        class_scan_steps(sys, canon, cls, out);
        break;
    }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reachability
// ---------------------------------------------------------------------------

EquivTrace key_bridge(const System& sys, const Term& t, const Term& key) {
    const CartesianPolygraph& P = sys.apm.theory;
    if (t == key) return {};
    if (sys.paradigm == ParadigmKind::Generic) {
        ClassEnumeration cls = enumerate_class(P, sys.apm.split.unoriented, t, sys.bounds.max_class);
        for (std::size_t i = 0; i < cls.members.size(); ++i)
            if (cls.members[i] == key) return cls.traces[i];
        fail(ErrorCode::MalformedStep, "term does not reach the given key");
    }
    TracedTerm a = canonical_trace(P, sys.apm.split, sys.paradigm, t);
    TracedTerm b = canonical_trace(P, sys.apm.split, sys.paradigm, key);
    if (a.result != b.result)
        fail(ErrorCode::MalformedStep, "term and key have different canonical forms");
    EquivTrace out = std::move(a.trace);
    EquivTrace back = invert(b.trace);
    out.insert(out.end(), back.begin(), back.end());
    return out;
}

std::optional<std::size_t> ReachabilityGraph::index_of(const Term& key) const {
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (keys[i] == key) return i;
    return std::nullopt;
}

ReachabilityGraph reachability(const System& sys, const std::vector<Term>& seeds) {
    const CartesianPolygraph& P = sys.apm.theory;
    ReachabilityGraph g;
    std::map<Term, std::size_t> index;
    std::deque<std::size_t> queue;

    auto intern = [&](const Term& key, std::size_t depth, int seed, int par) -> std::optional<std::size_t> {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (g.keys.size() >= sys.bounds.max_terms) {
            g.complete = false;
            return std::nullopt;
        }
        std::size_t idx = g.keys.size();
        g.keys.push_back(key);
        g.depth.push_back(depth);
        g.seed_origin.push_back(seed);
        g.parent.push_back(par);
        g.out.emplace_back();
        index.emplace(key, idx);
        queue.push_back(idx);
        return idx;
    };

    for (std::size_t s = 0; s < seeds.size(); ++s)
        intern(canonical_key(P, sys.apm.split, sys.paradigm, seeds[s], sys.bounds), 0,
               static_cast<int>(s), -1);

    while (!queue.empty() && g.complete) {
        std::size_t idx = queue.front();
        queue.pop_front();
        if (g.keys[idx].size() > kExpandSizeGuard) {
            g.complete = false;
            break;
        }
        std::vector<RewritingStep> steps = find_redexes(sys, g.keys[idx]);
        if (steps.empty()) continue;
        if (g.depth[idx] >= sys.bounds.max_depth) {
            g.complete = false;
            break;
        }
        for (RewritingStep& st : steps) {
            Term key = canonical_key(P, sys.apm.split, sys.paradigm, st.target, sys.bounds);
            std::optional<std::size_t> to =
                intern(key, g.depth[idx] + 1, g.seed_origin[idx], static_cast<int>(idx));
            if (!to) break;
            bool dup = false;
            for (const ReachEdge& e : g.out[idx])
                if (e.to == *to) {
                    dup = true;
                    break;
                }
            if (!dup) g.out[idx].push_back({*to, std::move(st)});
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Termination analysis
// ---------------------------------------------------------------------------

namespace {

/// Path along consecutive graph edges (plus the wrap-around edge for a
/// cycle), each step's post extended so targets land on node keys exactly.
RewritingPath chain_path(const System& sys, const ReachabilityGraph& g,
                         const std::vector<std::size_t>& nodes, bool wrap) {
    RewritingPath path;
    std::size_t hops = wrap ? nodes.size() : nodes.size() - 1;
    for (std::size_t k = 0; k < hops; ++k) {
        std::size_t from = nodes[k];
        std::size_t to = nodes[(k + 1) % nodes.size()];
        const ReachEdge* edge = nullptr;
        for (const ReachEdge& e : g.out[from])
            if (e.to == to) {
                edge = &e;
                break;
            }
        if (!edge) fail(ErrorCode::MalformedStep, "missing edge while rebuilding a witness path");
        EquivTrace post = edge->step.post;
        EquivTrace br = key_bridge(sys, edge->step.target, g.keys[to]);
        post.insert(post.end(), br.begin(), br.end());
        path.steps.push_back(make_step(edge->step.pre, edge->step.ctx, edge->step.rule, post));
    }
    return path;
}

/// First cycle found by depth-first search; node sequence c0..cm with edges
/// c0->c1->..->cm->c0.  Empty when acyclic.
std::vector<std::size_t> find_cycle(const ReachabilityGraph& g) {
    std::vector<int> color(g.keys.size(), 0); // 0 white, 1 on stack, 2 done
    std::vector<std::size_t> stack;
    std::vector<std::size_t> edge_pos(g.keys.size(), 0);
    for (std::size_t root = 0; root < g.keys.size(); ++root) {
        if (color[root] != 0) continue;
        stack.push_back(root);
        color[root] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            if (edge_pos[u] < g.out[u].size()) {
                std::size_t w = g.out[u][edge_pos[u]++].to;
                if (color[w] == 0) {
                    stack.push_back(w);
                    color[w] = 1;
                } else if (color[w] == 1) {
                    auto it = std::find(stack.begin(), stack.end(), w);
                    return {it, stack.end()};
                }
            } else {
                color[u] = 2;
                stack.pop_back();
            }
        }
    }
    return {};
}

/// Does `small` recur strictly inside `big` (as a subterm, or as a word
/// factor for the word-shaped paradigms)?
bool recurs_inside(const System& sys, const Term& big, const Term& small) {
    const Signature& sig = *sys.apm.theory.signature;
    if (sys.paradigm == ParadigmKind::String) {
        SymbolId mu = sig.symbol("mu");
        std::optional<SymbolId> unit = sig.find_symbol("e");
        Word wb = assoc_flatten(sig, mu, unit, big);
        Word ws = assoc_flatten(sig, mu, unit, small);
        if (ws.empty() || ws.size() >= wb.size()) return false;
        return std::search(wb.begin(), wb.end(), ws.begin(), ws.end()) != wb.end();
    }
    if (sys.paradigm == ParadigmKind::Group) {
        SignedWord wb = group_reduce(leaf_signature(sig, big));
        SignedWord ws = group_reduce(leaf_signature(sig, small));
        if (ws.empty() || ws.size() >= wb.size()) return false;
        return std::search(wb.begin(), wb.end(), ws.begin(), ws.end()) != wb.end();
    }
    if (big.size() <= small.size()) return false;
    for (const auto& [pos, sub] : enumerate_positions(big))
        if (sub == small) return true;
    return false;
}

std::vector<std::size_t> ancestor_chain(const ReachabilityGraph& g, std::size_t node) {
    std::vector<std::size_t> chain;
    for (int i = static_cast<int>(node); i >= 0; i = g.parent[i]) chain.push_back(i);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

} // namespace

const char* termination_kind_name(TerminationKind k) {
    switch (k) {
    case TerminationKind::Terminating: return "TERMINATING";
    case TerminationKind::QuasiTerminating: return "QUASI_TERMINATING";
    case TerminationKind::AlgebraicallyTerminating: return "ALGEBRAICALLY_TERMINATING";
    case TerminationKind::ExponentiationDetected: return "EXPONENTIATION_DETECTED";
    case TerminationKind::NonTerminatingEvidence: return "NON_TERMINATING_EVIDENCE";
    case TerminationKind::Unknown: return "UNKNOWN";
    }
    return "?";
}

TerminationVerdict termination_check(const System& sys, const std::vector<Term>& seeds) {
    ReachabilityGraph g = reachability(sys, seeds);
    TerminationVerdict v;
    v.complete = g.complete;
    if (g.complete) {
        std::vector<std::size_t> cycle = find_cycle(g);
        if (cycle.empty()) {
            v.kind = TerminationKind::Terminating;
            v.detail = "complete acyclic graph, " + std::to_string(g.keys.size()) + " terms";
        } else {
            v.kind = TerminationKind::QuasiTerminating;
            v.witness = chain_path(sys, g, cycle, true);
            v.detail = "complete graph with a cycle of length " + std::to_string(cycle.size());
        }
        return v;
    }

    // truncated exploration: look for divergence patterns along BFS chains
    for (std::size_t j = 0; j < g.keys.size(); ++j) {
        std::vector<std::size_t> chain = ancestor_chain(g, j);
        for (std::size_t a = 0; a + 1 < chain.size(); ++a) {
            if (!recurs_inside(sys, g.keys[j], g.keys[chain[a]])) continue;
            v.kind = TerminationKind::ExponentiationDetected;
            v.witness = chain_path(sys, g, {chain.begin() + a, chain.end()}, false);
            v.detail = "a reachable term recurs inside a strictly larger descendant";
            return v;
        }
    }
    for (std::size_t j = 0; j < g.keys.size(); ++j) {
        std::vector<std::size_t> chain = ancestor_chain(g, j);
        // longest strictly-increasing size subsequence of length 3 suffices
        for (std::size_t a = 0; a < chain.size(); ++a)
            for (std::size_t b = a + 1; b < chain.size(); ++b) {
                if (g.keys[chain[a]].size() >= g.keys[chain[b]].size()) continue;
                for (std::size_t c = b + 1; c < chain.size(); ++c) {
                    if (g.keys[chain[b]].size() >= g.keys[chain[c]].size()) continue;
                    v.kind = TerminationKind::NonTerminatingEvidence;
                    v.witness = chain_path(sys, g, {chain.begin() + a, chain.begin() + c + 1}, false);
                    v.detail = "canonical size grows repeatedly along one exploration chain";
                    return v;
                }
            }
    }
    v.kind = TerminationKind::Unknown;
    v.detail = "exploration truncated without a divergence pattern";
    return v;
}

// ---------------------------------------------------------------------------
// Quasi-normal forms
// ---------------------------------------------------------------------------

namespace {

/// Strongly connected components, Tarjan, iterative.  Returns component ids.
std::vector<int> scc_ids(const ReachabilityGraph& g) {
    std::size_t n = g.keys.size();
    std::vector<int> comp(n, -1), low(n), num(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int counter = 0, components = 0;
    struct Frame {
        std::size_t node;
        std::size_t edge = 0;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (num[root] != -1) continue;
        std::vector<Frame> call{{root}};
        while (!call.empty()) {
            Frame& f = call.back();
            std::size_t u = f.node;
            if (f.edge == 0) {
                num[u] = low[u] = counter++;
                stack.push_back(u);
                on_stack[u] = true;
            }
            if (f.edge < g.out[u].size()) {
                std::size_t w = g.out[u][f.edge++].to;
                if (num[w] == -1)
                    call.push_back({w});
                else if (on_stack[w])
                    low[u] = std::min(low[u], num[w]);
            } else {
                if (low[u] == num[u]) {
                    for (;;) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = components;
                        if (w == u) break;
                    }
                    ++components;
                }
                call.pop_back();
                if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[u]);
            }
        }
    }
    return comp;
}

} // namespace

QuasiNormalForm quasi_normal_form(const System& sys, const Term& t) {
    ReachabilityGraph g = reachability(sys, {t});
    if (!g.complete)
        fail(ErrorCode::BoundExhausted, "reachable graph truncated; quasi-normal form undecided");
    std::vector<int> comp = scc_ids(g);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < g.keys.size(); ++i) {
        bool quasi_irreducible = true;
        for (const ReachEdge& e : g.out[i])
            if (comp[e.to] != comp[i]) {
                quasi_irreducible = false;
                break;
            }
        if (!quasi_irreducible) continue;
        if (!best || g.keys[i] < g.keys[*best]) best = i;
    }
    // a complete finite graph always has a sink component
    if (!best) fail(ErrorCode::MalformedStep, "no quasi-irreducible node in a complete graph");
    return {g.keys[*best], g.depth[*best]};
}

} // namespace apm
