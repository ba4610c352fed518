#include "apm/normalizer.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace apm {

// ---------------------------------------------------------------------------
// Split symbol helpers
// ---------------------------------------------------------------------------

std::set<SymbolId> assoc_symbols(const ModuloSplit& split) {
    std::set<SymbolId> out;
    for (const TheoryRule& r : split.unoriented)
        if (is_assoc_axiom(r)) out.insert(ac_axiom_symbol(r));
    return out;
}

std::set<SymbolId> comm_symbols(const ModuloSplit& split) {
    std::set<SymbolId> out;
    for (const TheoryRule& r : split.unoriented)
        if (is_comm_axiom(r)) out.insert(ac_axiom_symbol(r));
    return out;
}

// ---------------------------------------------------------------------------
// Flatten / words
// ---------------------------------------------------------------------------

namespace {
void flatten_rec(const Signature& sig, SymbolId mu, std::optional<SymbolId> unit, const Term& t, Word& out) {
    if (!t.is_app())
        fail(ErrorCode::NonFlattenableSymbol, "open term cannot be flattened into a word");
    if (t.symbol() == mu) {
        for (const Term& a : t.args()) flatten_rec(sig, mu, unit, a, out);
        return;
    }
    if (unit && t.symbol() == *unit) return;
    if (t.args().empty()) {
        out.push_back(t.symbol());
        return;
    }
    fail(ErrorCode::NonFlattenableSymbol,
         "operation '" + sig.op(t.symbol()).name + "' has no word reading");
}
} // namespace

Word assoc_flatten(const Signature& sig, SymbolId mu, std::optional<SymbolId> unit, const Term& t) {
    Word out;
    flatten_rec(sig, mu, unit, t, out);
    return out;
}

Term word_to_term(const Signature& sig, SymbolId mu, std::optional<SymbolId> unit, const Word& w) {
    if (w.empty()) {
        if (!unit) fail(ErrorCode::NonFlattenableSymbol, "empty word needs a unit symbol");
        return Term::app(*unit);
    }
    (void)sig;
    Term acc = Term::app(w.back());
    for (std::size_t i = w.size() - 1; i-- > 0;) acc = Term::app(mu, {Term::app(w[i]), acc});
    return acc;
}

// ---------------------------------------------------------------------------
// AC canonical form
// ---------------------------------------------------------------------------

namespace {
void collect_chain(const Term& t, SymbolId f, std::vector<Term>& out) {
    if (t.is_app() && t.symbol() == f) {
        for (const Term& a : t.args()) collect_chain(a, f, out);
    } else {
        out.push_back(t);
    }
}

Term right_comb(SymbolId f, const std::vector<Term>& elems) {
    Term acc = elems.back();
    for (std::size_t i = elems.size() - 1; i-- > 0;) acc = Term::app(f, {elems[i], acc});
    return acc;
}
} // namespace

Term ac_canonical(const Term& t, const std::set<SymbolId>& assoc, const std::set<SymbolId>& comm) {
    if (!t.is_app() || t.args().empty()) return t;
    SymbolId f = t.symbol();
    if (assoc.count(f)) {
        std::vector<Term> elems;
        collect_chain(t, f, elems);
        for (Term& e : elems) e = ac_canonical(e, assoc, comm);
        if (comm.count(f)) std::stable_sort(elems.begin(), elems.end());
        return right_comb(f, elems);
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(ac_canonical(a, assoc, comm));
    if (comm.count(f) && args.size() == 2 && args[1] < args[0]) std::swap(args[0], args[1]);
    return Term::app(f, std::move(args));
}

// ---------------------------------------------------------------------------
// Group words
// ---------------------------------------------------------------------------

GroupView group_view(const Signature& sig) {
    return GroupView{sig.symbol("mu"), sig.symbol("e"), sig.symbol("inv")};
}

namespace {
void read_leaves(const Signature& sig, const GroupView& gv, const Term& t, bool inv, SignedWord& out) {
    if (!t.is_app()) fail(ErrorCode::NonFlattenableSymbol, "open term has no leaf word");
    SymbolId f = t.symbol();
    if (f == gv.inv) {
        read_leaves(sig, gv, t.args()[0], !inv, out);
    } else if (f == gv.mu) {
        // an inverted product reads right-to-left: (ab)⁻ = b⁻a⁻
        if (inv) {
            read_leaves(sig, gv, t.args()[1], inv, out);
            read_leaves(sig, gv, t.args()[0], inv, out);
        } else {
            read_leaves(sig, gv, t.args()[0], inv, out);
            read_leaves(sig, gv, t.args()[1], inv, out);
        }
    } else if (f == gv.e) {
        // unit contributes nothing
    } else if (t.args().empty()) {
        out.push_back(Letter{f, inv});
    } else {
        fail(ErrorCode::NonFlattenableSymbol, "operation '" + sig.op(f).name + "' has no word reading");
    }
}
} // namespace

SignedWord leaf_signature(const Signature& sig, const Term& t) {
    GroupView gv = group_view(sig);
    SignedWord w;
    read_leaves(sig, gv, t, false, w);
    // cancellations the oriented rules reach: a pair needs a successor letter
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 2 < w.size(); ++i) {
            if (w[i + 1] == inverse(w[i])) {
                w.erase(w.begin() + i, w.begin() + i + 2);
                changed = true;
                break;
            }
        }
    }
    return w;
}

Term signed_word_to_term(const Signature& sig, const SignedWord& w) {
    GroupView gv = group_view(sig);
    if (w.empty()) return Term::app(gv.e);
    auto atom = [&](Letter l) {
        Term q = Term::app(l.sym);
        return l.inverted ? Term::app(gv.inv, {q}) : q;
    };
    Term acc = atom(w.back());
    for (std::size_t i = w.size() - 1; i-- > 0;) acc = Term::app(gv.mu, {atom(w[i]), acc});
    return acc;
}

Term group_canonical(const Signature& sig, const Term& t) {
    return signed_word_to_term(sig, group_reduce(leaf_signature(sig, t)));
}

// ---------------------------------------------------------------------------
// Linear view and polynomial evaluation
// ---------------------------------------------------------------------------

LinearView linear_view(const Signature& sig) {
    LinearView v{sig.symbol("add"), sig.symbol("zero"), sig.symbol("neg"),
                 sig.symbol("mul"), sig.symbol("one"),  sig.symbol("oplus"),
                 sig.symbol("ozero"), sig.symbol("oneg"), sig.symbol("act"),
                 std::nullopt};
    v.dot = sig.find_symbol("dot");
    return v;
}

namespace {
Coeff eval_scalar_rec(const Signature& sig, const LinearView& v, const Term& t) {
    if (!t.is_app()) fail(ErrorCode::IllTypedLinearTerm, "open term has no scalar value");
    SymbolId f = t.symbol();
    if (f == v.add) return eval_scalar_rec(sig, v, t.args()[0]) + eval_scalar_rec(sig, v, t.args()[1]);
    if (f == v.mul) return eval_scalar_rec(sig, v, t.args()[0]) * eval_scalar_rec(sig, v, t.args()[1]);
    if (f == v.neg) return -eval_scalar_rec(sig, v, t.args()[0]);
    if (f == v.zero) return 0;
    if (f == v.one) return 1;
    fail(ErrorCode::IllTypedLinearTerm, "'" + sig.op(f).name + "' has no scalar reading");
}

Polynomial eval_module_rec(const Signature& sig, const LinearView& v, const Term& t) {
    if (!t.is_app()) fail(ErrorCode::IllTypedLinearTerm, "open term has no linear reading");
    SymbolId f = t.symbol();
    if (f == v.oplus) return eval_module_rec(sig, v, t.args()[0]) + eval_module_rec(sig, v, t.args()[1]);
    if (f == v.ozero) return Polynomial::zero();
    if (f == v.oneg) return -eval_module_rec(sig, v, t.args()[0]);
    if (f == v.act)
        return eval_module_rec(sig, v, t.args()[1]).scaled(eval_scalar_rec(sig, v, t.args()[0]));
    if (v.dot && f == *v.dot)
        return eval_module_rec(sig, v, t.args()[0]) * eval_module_rec(sig, v, t.args()[1]);
    if (t.args().empty()) return Polynomial::monomial(Word{f});
    fail(ErrorCode::IllTypedLinearTerm, "'" + sig.op(f).name + "' has no linear reading");
}
} // namespace

Coeff eval_scalar(const Signature& sig, const Term& t) {
    return eval_scalar_rec(sig, linear_view(sig), t);
}

Term coeff_to_term(const Signature& sig, const Coeff& c) {
    LinearView v = linear_view(sig);
    if (boost::multiprecision::denominator(c) != 1)
        fail(ErrorCode::NotRepresentable, "rational coefficient has no canonical term encoding");
    Integer n = boost::multiprecision::numerator(c);
    if (n == 0) return Term::app(v.zero);
    Term unit = n > 0 ? Term::app(v.one) : Term::app(v.neg, {Term::app(v.one)});
    Integer k = n > 0 ? n : Integer(-n);
    Term acc = unit;
    for (Integer i = 1; i < k; ++i) acc = Term::app(v.add, {unit, acc});
    return acc;
}

Polynomial linear_canonical(const Signature& sig, const Term& t) {
    return eval_module_rec(sig, linear_view(sig), t);
}

Term polynomial_to_term(const Signature& sig, const Polynomial& p) {
    LinearView v = linear_view(sig);
    if (p.is_zero()) return Term::app(v.ozero);
    std::vector<Term> monos;
    for (const auto& [w, c] : p.terms()) {
        if (w.empty()) fail(ErrorCode::NotRepresentable, "empty monomial has no term encoding");
        Term wt;
        if (w.size() == 1) {
            wt = Term::app(w[0]);
        } else {
            if (!v.dot)
                fail(ErrorCode::NotRepresentable, "product monomial needs a product symbol");
            wt = word_to_term(sig, *v.dot, std::nullopt, w);
        }
        monos.push_back(c == 1 ? wt : Term::app(v.act, {coeff_to_term(sig, c), wt}));
    }
    std::sort(monos.begin(), monos.end());
    return right_comb(v.oplus, monos);
}

// ---------------------------------------------------------------------------
// ModC candidate enumeration (applicability modulo AC)
// ---------------------------------------------------------------------------

namespace {

struct ModcCtx {
    const Signature& sig;
    LinearView v;
    std::set<SymbolId> assoc;
    std::set<SymbolId> comm;

    explicit ModcCtx(const Signature& s) : sig(s), v(linear_view(s)) {
        assoc = {v.add, v.mul, v.oplus};
        comm = {v.add, v.mul, v.oplus};
        if (v.dot) assoc.insert(*v.dot);
    }
    bool ac_equal(const Term& a, const Term& b) const {
        return ac_canonical(a, assoc, comm) == ac_canonical(b, assoc, comm);
    }
    bool is(const Term& t, SymbolId f) const { return t.is_app() && t.symbol() == f; }
};

struct LocalCand {
    std::string rule;
    Term arranged;  // replaces the current subterm
    Position local; // redex position inside `arranged`
    Term from, to;
};

std::vector<Term> without(const std::vector<Term>& xs, std::size_t i) {
    std::vector<Term> out;
    out.reserve(xs.size() - 1);
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (k != i) out.push_back(xs[k]);
    return out;
}
std::vector<Term> without2(const std::vector<Term>& xs, std::size_t i, std::size_t j) {
    std::vector<Term> out;
    out.reserve(xs.size() - 2);
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (k != i && k != j) out.push_back(xs[k]);
    return out;
}

/// others + a final redex node: arranged = f(comb(others), redex) unless
/// others is empty, in which case the redex is the whole arrangement.
void tail_cand(std::vector<LocalCand>& out, const std::string& rule, SymbolId f,
               const std::vector<Term>& others, const Term& redex, const Term& contractum) {
    LocalCand c;
    c.rule = rule;
    c.from = redex;
    c.to = contractum;
    if (others.empty()) {
        c.arranged = redex;
        c.local = Position{};
    } else {
        c.arranged = Term::app(f, {right_comb(f, others), redex});
        c.local = Position{{2}};
    }
    out.push_back(std::move(c));
}

/// redex at the local root spanning the whole arrangement
void root_cand(std::vector<LocalCand>& out, const std::string& rule, const Term& redex,
               const Term& contractum) {
    out.push_back(LocalCand{rule, redex, Position{}, redex, contractum});
}

void add_chain_cands(const ModcCtx& cx, const std::vector<Term>& E, std::vector<LocalCand>& out) {
    const LinearView& v = cx.v;
    for (std::size_t i = 0; i < E.size(); ++i) {
        if (cx.is(E[i], v.zero)) {
            // ring1: x + 0 => x
            std::vector<Term> others = without(E, i);
            Term x = right_comb(v.add, others);
            root_cand(out, "ring1", Term::app(v.add, {x, E[i]}), x);
        }
    }
    for (std::size_t i = 0; i < E.size(); ++i)
        for (std::size_t j = 0; j < E.size(); ++j) {
            if (i == j || !cx.is(E[j], v.neg)) continue;
            if (!cx.ac_equal(E[j].args()[0], E[i])) continue;
            // ring2: x + (−x) => 0
            Term redex = Term::app(v.add, {E[i], Term::app(v.neg, {E[i]})});
            tail_cand(out, "ring2", v.add, without2(E, i, j), redex, Term::app(v.zero));
        }
}

void mul_chain_cands(const ModcCtx& cx, const std::vector<Term>& E, std::vector<LocalCand>& out) {
    const LinearView& v = cx.v;
    for (std::size_t i = 0; i < E.size(); ++i) {
        std::vector<Term> others = without(E, i);
        Term X = right_comb(v.mul, others);
        if (cx.is(E[i], v.add)) {
            // ring6: x·(y+z) => x·y + x·z, one candidate per summand pulled out
            std::vector<Term> S;
            collect_chain(E[i], v.add, S);
            for (std::size_t j = 0; j < S.size(); ++j) {
                Term y = S[j], z = right_comb(v.add, without(S, j));
                Term redex = Term::app(v.mul, {X, Term::app(v.add, {y, z})});
                Term to = Term::app(v.add, {Term::app(v.mul, {X, y}), Term::app(v.mul, {X, z})});
                root_cand(out, "ring6", redex, to);
            }
        } else if (cx.is(E[i], v.zero)) {
            root_cand(out, "ring7", Term::app(v.mul, {X, E[i]}), Term::app(v.zero));
        } else if (cx.is(E[i], v.neg)) {
            Term u = E[i].args()[0];
            root_cand(out, "ring8", Term::app(v.mul, {X, E[i]}),
                      Term::app(v.neg, {Term::app(v.mul, {X, u})}));
        } else if (cx.is(E[i], v.one)) {
            root_cand(out, "ring9", Term::app(v.mul, {E[i], X}), X);
        }
    }
}

void oplus_chain_cands(const ModcCtx& cx, const std::vector<Term>& E, std::vector<LocalCand>& out) {
    const LinearView& v = cx.v;
    for (std::size_t i = 0; i < E.size(); ++i)
        if (cx.is(E[i], v.ozero)) {
            std::vector<Term> others = without(E, i);
            Term x = right_comb(v.oplus, others);
            root_cand(out, "mod1", Term::app(v.oplus, {x, E[i]}), x);
        }
    for (std::size_t i = 0; i < E.size(); ++i)
        for (std::size_t j = i + 1; j < E.size(); ++j) {
            if (cx.is(E[i], v.act) && cx.is(E[j], v.act) &&
                cx.ac_equal(E[i].args()[1], E[j].args()[1])) {
                // mod4: x.a ⊕ y.a => (x+y).a
                const Term& a = E[i].args()[1];
                Term redex = Term::app(v.oplus, {E[i], Term::app(v.act, {E[j].args()[0], a})});
                Term to = Term::app(v.act, {Term::app(v.add, {E[i].args()[0], E[j].args()[0]}), a});
                tail_cand(out, "mod4", v.oplus, without2(E, i, j), redex, to);
            }
            if (cx.ac_equal(E[i], E[j])) {
                // mod7: a ⊕ a => (1+1).a
                Term redex = Term::app(v.oplus, {E[i], E[i]});
                Term to = Term::app(v.act, {Term::app(v.add, {Term::app(v.one), Term::app(v.one)}), E[i]});
                tail_cand(out, "mod7", v.oplus, without2(E, i, j), redex, to);
            }
        }
    for (std::size_t i = 0; i < E.size(); ++i)
        for (std::size_t j = 0; j < E.size(); ++j) {
            if (i == j || !cx.is(E[j], v.act)) continue;
            if (!cx.ac_equal(E[j].args()[1], E[i])) continue;
            // mod6: a ⊕ (x.a) => (1+x).a
            Term redex = Term::app(v.oplus, {E[i], Term::app(v.act, {E[j].args()[0], E[i]})});
            Term to = Term::app(v.act, {Term::app(v.add, {Term::app(v.one), E[j].args()[0]}), E[i]});
            tail_cand(out, "mod6", v.oplus, without2(E, i, j), redex, to);
        }
}

void dot_chain_cands(const ModcCtx& cx, const std::vector<Term>& D, std::vector<LocalCand>& out) {
    const LinearView& v = cx.v;
    SymbolId dot = *v.dot;
    for (std::size_t i = 0; i < D.size(); ++i) {
        bool first = (i == 0);
        // the factor D[i] exposed against the rest of the (order-preserving) chain
        Term mate = first ? right_comb(dot, std::vector<Term>(D.begin() + 1, D.end()))
                          : right_comb(dot, std::vector<Term>(D.begin(), D.begin() + i));
        std::vector<Term> suffix(D.begin() + i + 1, D.end());
        auto emit = [&](const std::string& rule, const Term& redex, const Term& to) {
            LocalCand c;
            c.rule = rule;
            c.from = redex;
            c.to = to;
            if (first || suffix.empty()) {
                c.arranged = redex;
                c.local = Position{};
            } else {
                c.arranged = Term::app(dot, {redex, right_comb(dot, suffix)});
                c.local = Position{{1}};
            }
            out.push_back(std::move(c));
        };
        if (cx.is(D[i], v.oplus)) {
            std::vector<Term> S;
            collect_chain(D[i], v.oplus, S);
            for (std::size_t j = 0; j < S.size(); ++j) {
                Term y = S[j], z = right_comb(v.oplus, without(S, j));
                Term sum = Term::app(v.oplus, {y, z});
                if (first)
                    emit("alg1", Term::app(dot, {sum, mate}),
                         Term::app(v.oplus, {Term::app(dot, {y, mate}), Term::app(dot, {z, mate})}));
                else
                    emit("alg2", Term::app(dot, {mate, sum}),
                         Term::app(v.oplus, {Term::app(dot, {mate, y}), Term::app(dot, {mate, z})}));
            }
        } else if (cx.is(D[i], v.act)) {
            Term s = D[i].args()[0], u = D[i].args()[1];
            if (first)
                emit("alg3", Term::app(dot, {D[i], mate}), Term::app(v.act, {s, Term::app(dot, {u, mate})}));
            else
                emit("alg4", Term::app(dot, {mate, D[i]}), Term::app(v.act, {s, Term::app(dot, {mate, u})}));
        } else if (cx.is(D[i], v.ozero)) {
            if (first)
                emit("alg5", Term::app(dot, {D[i], mate}), Term::app(v.ozero));
            else
                emit("alg6", Term::app(dot, {mate, D[i]}), Term::app(v.ozero));
        }
    }
}

void node_cands(const ModcCtx& cx, const Term& t, std::vector<LocalCand>& out) {
    const LinearView& v = cx.v;
    SymbolId f = t.symbol();
    if (f == v.neg) {
        const Term& u = t.args()[0];
        if (cx.is(u, v.zero)) root_cand(out, "ring3", t, Term::app(v.zero));
        if (cx.is(u, v.neg)) root_cand(out, "ring4", t, u.args()[0]);
        if (cx.is(u, v.add)) {
            // ring5: −(x+y) => (−x)+(−y)
            std::vector<Term> S;
            collect_chain(u, v.add, S);
            for (std::size_t j = 0; j < S.size(); ++j) {
                Term x = S[j], y = right_comb(v.add, without(S, j));
                LocalCand c;
                c.rule = "ring5";
                c.from = Term::app(v.neg, {Term::app(v.add, {x, y})});
                c.to = Term::app(v.add, {Term::app(v.neg, {x}), Term::app(v.neg, {y})});
                c.arranged = c.from;
                c.local = Position{};
                out.push_back(std::move(c));
            }
        }
    } else if (f == v.act) {
        const Term &s = t.args()[0], &a = t.args()[1];
        if (cx.is(a, v.act))
            root_cand(out, "mod2", t,
                      Term::app(v.act, {Term::app(v.mul, {s, a.args()[0]}), a.args()[1]}));
        if (cx.is(s, v.one)) root_cand(out, "mod3", t, a);
        if (cx.is(a, v.oplus)) {
            std::vector<Term> S;
            collect_chain(a, v.oplus, S);
            for (std::size_t j = 0; j < S.size(); ++j) {
                Term y = S[j], z = right_comb(v.oplus, without(S, j));
                LocalCand c;
                c.rule = "mod5";
                c.from = Term::app(v.act, {s, Term::app(v.oplus, {y, z})});
                c.to = Term::app(v.oplus, {Term::app(v.act, {s, y}), Term::app(v.act, {s, z})});
                c.arranged = c.from;
                c.local = Position{};
                out.push_back(std::move(c));
            }
        }
        if (cx.is(a, v.ozero)) root_cand(out, "mod8", t, Term::app(v.ozero));
        if (cx.is(s, v.zero)) root_cand(out, "mod9", t, Term::app(v.ozero));
    } else if (f == v.oneg) {
        root_cand(out, "mod10", t,
                  Term::app(v.act, {Term::app(v.neg, {Term::app(v.one)}), t.args()[0]}));
    }
}

void cand_rec(const ModcCtx& cx, const Term& root, const Term& t, const Position& pos, SymbolId parent,
              bool has_parent, std::vector<ModcCandidate>& out) {
    if (!t.is_app()) return;
    SymbolId f = t.symbol();
    std::vector<LocalCand> local;
    bool maximal = !(has_parent && parent == f);
    if (maximal && cx.assoc.count(f) && t.args().size() == 2) {
        std::vector<Term> E;
        collect_chain(t, f, E);
        if (f == cx.v.add) add_chain_cands(cx, E, local);
        else if (f == cx.v.mul) mul_chain_cands(cx, E, local);
        else if (f == cx.v.oplus) oplus_chain_cands(cx, E, local);
        else if (cx.v.dot && f == *cx.v.dot) dot_chain_cands(cx, E, local);
    }
    node_cands(cx, t, local);
    for (LocalCand& lc : local) {
        ModcCandidate c;
        c.rule = std::move(lc.rule);
        c.arranged = replace_at(root, pos, lc.arranged);
        c.pos = pos;
        c.pos.path.insert(c.pos.path.end(), lc.local.path.begin(), lc.local.path.end());
        c.from = std::move(lc.from);
        c.to = std::move(lc.to);
        c.result = replace_at(c.arranged, c.pos, c.to);
        out.push_back(std::move(c));
    }
    for (std::uint32_t i = 1; i <= t.args().size(); ++i)
        cand_rec(cx, root, t.args()[i - 1], pos.child(i), f, true, out);
}

} // namespace

std::vector<ModcCandidate> modc_candidates(const Signature& sig, const Term& t) {
    ModcCtx cx(sig);
    std::vector<ModcCandidate> out;
    cand_rec(cx, t, t, Position{}, 0, false, out);
    return out;
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

namespace {
Integer modc_interp(const LinearView& v, const Term& t) {
    SymbolId f = t.symbol();
    auto a = [&](std::size_t i) { return modc_interp(v, t.args()[i]); };
    if (f == v.add) return a(0) + a(1) + 2;
    if (f == v.mul) return a(0) * a(1);
    if (f == v.neg) return 2 * a(0) + 1;
    if (f == v.zero || f == v.one) return 2;
    if (f == v.oplus) return a(0) + a(1) + 3;
    if (f == v.ozero) return 2;
    if (f == v.oneg) return 2 * a(0) + 1;
    if (f == v.act) return a(0) * a(1) + a(0);
    if (v.dot && f == *v.dot) return a(0) * a(1);
    return 2; // constants (letters)
}

void count_additive(const LinearView& v, const Term& t, Integer& n) {
    if (!t.is_app()) return;
    if (t.symbol() == v.oplus || t.symbol() == v.oneg) ++n;
    for (const Term& a : t.args()) count_additive(v, a, n);
}
} // namespace

ModcMeasure modc_measure(const Signature& sig, const Term& t) {
    LinearView v = linear_view(sig);
    ModcMeasure m;
    m.additive = 0;
    count_additive(v, t, m.additive);
    m.interp = modc_interp(v, t);
    return m;
}

namespace {
Integer group_weight(SymbolId mu, SymbolId inv, const Term& t) {
    if (!t.is_app()) return 1;
    if (t.symbol() == inv) return 3 * group_weight(mu, inv, t.args()[0]);
    if (t.symbol() == mu)
        return group_weight(mu, inv, t.args()[0]) + group_weight(mu, inv, t.args()[1]) + 1;
    return 1;
}
} // namespace

std::pair<Integer, std::size_t> group_measure(const Signature& sig, const Term& t) {
    return {group_weight(sig.symbol("mu"), sig.symbol("inv"), t), t.size()};
}

// ---------------------------------------------------------------------------
// Traced normalization
// ---------------------------------------------------------------------------

namespace {

bool has_axiom(const CartesianPolygraph& P, const std::string& name) {
    for (const TheoryRule& r : P.axioms)
        if (r.name == name) return true;
    return false;
}

struct AcNames {
    std::map<SymbolId, std::string> assoc_name;
    std::map<SymbolId, std::string> comm_name;
};
AcNames ac_names(const ModuloSplit& split) {
    AcNames n;
    for (const TheoryRule& r : split.unoriented) {
        if (is_assoc_axiom(r)) n.assoc_name[ac_axiom_symbol(r)] = r.name;
        if (is_comm_axiom(r)) n.comm_name[ac_axiom_symbol(r)] = r.name;
    }
    return n;
}

void record(Term& w, EquivTrace& trace, const EquivStep& s) {
    w = apply_equiv_step(w, s);
    trace.push_back(s);
}

/// Rewrite w to ac_canonical(w) recording every A/C axiom application.
void canonical_ac_trace_mut(const ModuloSplit& split, Term& w, EquivTrace& trace) {
    std::set<SymbolId> assoc = assoc_symbols(split), comm = comm_symbols(split);
    AcNames names = ac_names(split);
    auto canon = [&](const Term& t) { return ac_canonical(t, assoc, comm); };
    for (;;) {
        bool progressed = false;
        // 1) first associativity redex f(f(x,y),z)
        for (const auto& [pos, sub] : enumerate_positions(w)) {
            if (!sub.is_app()) continue;
            SymbolId f = sub.symbol();
            if (!assoc.count(f) || sub.args().size() != 2) continue;
            const Term& l = sub.args()[0];
            if (l.is_app() && l.symbol() == f) {
                Term to = Term::app(f, {l.args()[0], Term::app(f, {l.args()[1], sub.args()[1]})});
                record(w, trace, EquivStep{pos, names.assoc_name.at(f), true, sub, to});
                progressed = true;
                break;
            }
        }
        if (progressed) continue;
        // 2) first order violation inside a commutative chain (or plain C node)
        for (const auto& [pos, sub] : enumerate_positions(w)) {
            if (!sub.is_app() || sub.args().size() != 2) continue;
            SymbolId f = sub.symbol();
            if (!comm.count(f)) continue;
            if (assoc.count(f)) {
                // chains are right combs now; sort adjacent elements
                // only handle at a maximal chain node: parent link unknown here,
                // but any out-of-order adjacent pair is visible at its comb node
                const Term& a = sub.args()[0];
                const Term& rest = sub.args()[1];
                if (rest.is_app() && rest.symbol() == f) {
                    const Term& b = rest.args()[0];
                    if (Term::compare(canon(b), canon(a)) < 0) {
                        // three-step transposition: A⁻, C (inner), A
                        Term s1 = Term::app(f, {Term::app(f, {a, b}), rest.args()[1]});
                        record(w, trace, EquivStep{pos, names.assoc_name.at(f), false, sub, s1});
                        Term inner_from = Term::app(f, {a, b});
                        Term inner_to = Term::app(f, {b, a});
                        record(w, trace, EquivStep{pos.child(1), names.comm_name.at(f), true, inner_from, inner_to});
                        Term s2 = Term::app(f, {b, Term::app(f, {a, rest.args()[1]})});
                        Term s1_swapped = Term::app(f, {inner_to, rest.args()[1]});
                        record(w, trace, EquivStep{pos, names.assoc_name.at(f), true, s1_swapped, s2});
                        progressed = true;
                        break;
                    }
                } else {
                    const Term& b = rest;
                    if (Term::compare(canon(b), canon(a)) < 0) {
                        record(w, trace, EquivStep{pos, names.comm_name.at(f), true, sub, Term::app(f, {b, a})});
                        progressed = true;
                        break;
                    }
                }
            } else {
                const Term& a = sub.args()[0];
                const Term& b = sub.args()[1];
                if (Term::compare(canon(b), canon(a)) < 0)
                    record(w, trace, EquivStep{pos, names.comm_name.at(f), true, sub, Term::app(f, {b, a})});
                else
                    continue;
                progressed = true;
                break;
            }
        }
        if (!progressed) break;
    }
}

TracedTerm canonical_trace_string(const CartesianPolygraph& P, const Term& t) {
    const Signature& sig = *P.signature;
    SymbolId mu = sig.symbol("mu");
    std::optional<SymbolId> unit = sig.find_symbol("e");
    bool has_units = unit && has_axiom(P, "E_l");
    Term w = t;
    EquivTrace trace;
    for (;;) {
        bool progressed = false;
        for (const auto& [pos, sub] : enumerate_positions(w)) {
            if (!sub.is_app() || sub.symbol() != mu) continue;
            const Term &a = sub.args()[0], &b = sub.args()[1];
            if (has_units && a.is_app() && a.symbol() == *unit) {
                record(w, trace, EquivStep{pos, "E_l", true, sub, b});
            } else if (has_units && b.is_app() && b.symbol() == *unit) {
                record(w, trace, EquivStep{pos, "E_r", true, sub, a});
            } else if (a.is_app() && a.symbol() == mu && has_axiom(P, "A")) {
                Term to = Term::app(mu, {a.args()[0], Term::app(mu, {a.args()[1], b})});
                record(w, trace, EquivStep{pos, "A", true, sub, to});
            } else {
                continue;
            }
            progressed = true;
            break;
        }
        if (!progressed) break;
    }
    return {w, trace};
}

TracedTerm canonical_trace_group(const CartesianPolygraph& P, const Term& t) {
    const Signature& sig = *P.signature;
    GroupView gv = group_view(sig);
    Term w = t;
    EquivTrace trace;
    auto is_inv_pair = [&](const Term& a, const Term& b) -> int {
        // 1: (x, inv x) -> G4 ; 2: (inv x, x) -> G5 ; 0: neither
        if (b.is_app() && b.symbol() == gv.inv && b.args()[0] == a) return 1;
        if (a.is_app() && a.symbol() == gv.inv && a.args()[0] == b) return 2;
        return 0;
    };
    Term e_term = Term::app(gv.e);
    for (;;) {
        bool progressed = false;
        for (const auto& [pos, sub] : enumerate_positions(w)) {
            if (!sub.is_app()) continue;
            if (sub.symbol() == gv.inv) {
                const Term& u = sub.args()[0];
                if (u.is_app() && u.symbol() == gv.e) {
                    record(w, trace, EquivStep{pos, "G1", true, sub, u});
                } else if (u.is_app() && u.symbol() == gv.inv) {
                    record(w, trace, EquivStep{pos, "G2", true, sub, u.args()[0]});
                } else if (u.is_app() && u.symbol() == gv.mu) {
                    Term to = Term::app(gv.mu, {Term::app(gv.inv, {u.args()[1]}),
                                                Term::app(gv.inv, {u.args()[0]})});
                    record(w, trace, EquivStep{pos, "G3", true, sub, to});
                } else {
                    continue;
                }
            } else if (sub.symbol() == gv.mu && sub.args()[0].is_app() &&
                       sub.args()[0].symbol() == gv.e) {
                record(w, trace, EquivStep{pos, "E_l", true, sub, sub.args()[1]});
            } else if (sub.symbol() == gv.mu && sub.args()[1].is_app() &&
                       sub.args()[1].symbol() == gv.e) {
                record(w, trace, EquivStep{pos, "E_r", true, sub, sub.args()[0]});
            } else if (sub.symbol() == gv.mu && sub.args()[0].is_app() &&
                       sub.args()[0].symbol() == gv.mu) {
                const Term& l = sub.args()[0];
                Term to = Term::app(gv.mu, {l.args()[0], Term::app(gv.mu, {l.args()[1], sub.args()[1]})});
                record(w, trace, EquivStep{pos, "A", true, sub, to});
            } else {
                continue;
            }
            progressed = true;
            break;
        }
        if (progressed) continue;
        // combs are right-nested now; cancel the first pair that has a successor
        for (const auto& [pos, sub] : enumerate_positions(w)) {
            if (!sub.is_app() || sub.symbol() != gv.mu) continue;
            const Term& rest = sub.args()[1];
            if (!(rest.is_app() && rest.symbol() == gv.mu)) continue;
            int k = is_inv_pair(sub.args()[0], rest.args()[0]);
            if (k == 0) continue;
            record(w, trace, EquivStep{pos, k == 1 ? "G4" : "G5", true, sub, rest.args()[1]});
            progressed = true;
            break;
        }
        if (progressed) continue;
        // a cancelling pair at the very end of the comb has no successor for
        // G4/G5; conjure one with a backwards unit step
        for (const auto& [pos, sub] : enumerate_positions(w)) {
            if (!sub.is_app() || sub.symbol() != gv.mu) continue;
            const Term& b = sub.args()[1];
            if (b.is_app() && b.symbol() == gv.mu) continue;
            int k = is_inv_pair(sub.args()[0], b);
            if (k == 0) continue;
            record(w, trace, EquivStep{pos.child(2), "E_r", false, b, Term::app(gv.mu, {b, e_term})});
            Term grown = Term::app(gv.mu, {sub.args()[0], Term::app(gv.mu, {b, e_term})});
            record(w, trace, EquivStep{pos, k == 1 ? "G4" : "G5", true, grown, e_term});
            progressed = true;
            break;
        }
        if (!progressed) break;
    }
    return {w, trace};
}

TracedTerm canonical_trace_linear(const CartesianPolygraph& P, const ModuloSplit& split, const Term& t) {
    const Signature& sig = *P.signature;
    Term w = t;
    EquivTrace trace;
    std::size_t guard = 0;
    for (;;) {
        auto cands = modc_candidates(sig, w);
        if (cands.empty()) break;
        if (++guard > 100000) fail(ErrorCode::BoundExhausted, "linear normalization exceeded step budget");
        const ModcCandidate& c = cands.front();
        EquivTrace br = ac_bridge(P, split, w, c.arranged);
        for (const EquivStep& s : br) record(w, trace, s);
        record(w, trace, EquivStep{c.pos, c.rule, true, c.from, c.to});
    }
    Term target = polynomial_to_term(sig, linear_canonical(sig, t));
    EquivTrace br = ac_bridge(P, split, w, target);
    for (const EquivStep& s : br) record(w, trace, s);
    return {w, trace};
}

} // namespace

TracedTerm canonical_trace(const CartesianPolygraph& P, const ModuloSplit& split, ParadigmKind par,
                           const Term& t) {
    switch (par) {
    case ParadigmKind::String: return canonical_trace_string(P, t);
    case ParadigmKind::Group: return canonical_trace_group(P, t);
    case ParadigmKind::Linear: return canonical_trace_linear(P, split, t);
    case ParadigmKind::Generic: return {t, {}};
    }
    return {t, {}};
}

EquivTrace ac_bridge(const CartesianPolygraph& P, const ModuloSplit& split, const Term& a, const Term& b) {
    (void)P;
    if (a == b) return {};
    Term wa = a, wb = b;
    EquivTrace ta, tb;
    canonical_ac_trace_mut(split, wa, ta);
    canonical_ac_trace_mut(split, wb, tb);
    if (wa != wb)
        fail(ErrorCode::MalformedStep, "terms are not equivalent modulo the unoriented axioms");
    EquivTrace out = std::move(ta);
    EquivTrace back = invert(tb);
    out.insert(out.end(), back.begin(), back.end());
    return out;
}

// ---------------------------------------------------------------------------
// Class enumeration
// ---------------------------------------------------------------------------

ClassEnumeration enumerate_class(const CartesianPolygraph& P, const std::vector<TheoryRule>& unoriented,
                                 const Term& t, std::size_t bound) {
    ClassEnumeration out;
    std::map<Term, std::size_t> seen;
    struct Edge {
        std::size_t parent;
        EquivStep step;
    };
    std::vector<Edge> edges; // per member; member 0 has no edge
    std::deque<std::size_t> queue;
    out.members.push_back(t);
    edges.push_back({0, {}});
    seen.emplace(t, 0);
    queue.push_back(0);
    while (!queue.empty() && out.complete) {
        std::size_t idx = queue.front();
        queue.pop_front();
        Term cur = out.members[idx];
        for (const GroundAxiomInstance& inst : groundify_matches(P, unoriented, cur)) {
            Term next = inst.ctx.apply(inst.to);
            if (seen.count(next)) continue;
            if (out.members.size() >= bound) {
                out.complete = false;
                break;
            }
            std::size_t nidx = out.members.size();
            out.members.push_back(next);
            edges.push_back({idx, EquivStep{inst.ctx.hole_position(), inst.axiom, inst.forward, inst.from, inst.to}});
            seen.emplace(next, nidx);
            queue.push_back(nidx);
        }
    }
    out.traces.resize(out.members.size());
    for (std::size_t i = 1; i < out.members.size(); ++i) {
        out.traces[i] = out.traces[edges[i].parent];
        out.traces[i].push_back(edges[i].step);
    }
    return out;
}

WordExpansion insertion_expansions(const SignedWord& w, const std::vector<SymbolId>& alphabet,
                                   std::size_t insertions) {
    WordExpansion out;
    std::set<SignedWord> seen;
    std::vector<SignedWord> frontier{w};
    seen.insert(w);
    out.words.push_back(w);
    for (std::size_t level = 0; level < insertions; ++level) {
        std::vector<SignedWord> next;
        for (const SignedWord& cur : frontier) {
            for (std::size_t i = 0; i <= cur.size(); ++i) {
                for (SymbolId q : alphabet) {
                    for (bool invFirst : {false, true}) {
                        Letter a{q, invFirst};
                        SignedWord nw(cur.begin(), cur.begin() + i);
                        nw.push_back(a);
                        nw.push_back(inverse(a));
                        nw.insert(nw.end(), cur.begin() + i, cur.end());
                        if (seen.insert(nw).second) {
                            out.words.push_back(nw);
                            next.push_back(nw);
                        }
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    out.complete = (insertions == 0);
    return out;
}

// ---------------------------------------------------------------------------
// Equivalence decision
// ---------------------------------------------------------------------------

namespace {

Tri equiv_generic(const CartesianPolygraph& P, const Term& a, const Term& b, const Bounds& bounds) {
    ModuloSplit split = modulo_split(P);
    if (split.oriented.empty()) {
        // pure A/C theory: canonical forms decide exactly
        std::set<SymbolId> as = assoc_symbols(split), cs = comm_symbols(split);
        return ac_canonical(a, as, cs) == ac_canonical(b, as, cs) ? Tri::True : Tri::False;
    }
    // bounded bidirectional closure under all axioms, both directions
    auto grow = [&](std::map<Term, char>& seen, std::deque<Term>& queue, char tag) -> bool {
        // returns true if the closure is complete under the bound
        while (!queue.empty()) {
            if (seen.size() >= bounds.max_class) return false;
            Term cur = queue.front();
            queue.pop_front();
            for (const GroundAxiomInstance& inst : groundify_matches(P, cur)) {
                Term next = inst.ctx.apply(inst.to);
                if (seen.emplace(next, tag).second) queue.push_back(next);
            }
        }
        return true;
    };
    std::map<Term, char> sa{{a, 'a'}}, sb{{b, 'b'}};
    std::deque<Term> qa{a}, qb{b};
    bool ca = grow(sa, qa, 'a');
    bool cb = grow(sb, qb, 'b');
    for (const auto& [t, _] : sa)
        if (sb.count(t)) return Tri::True;
    if (ca && cb) return Tri::False;
    return Tri::Unknown;
}

} // namespace

Tri equiv_modulo(const CartesianPolygraph& P, ParadigmKind par, const Term& a, const Term& b,
                 const Bounds& bounds) {
    const Signature& sig = *P.signature;
    switch (par) {
    case ParadigmKind::String: {
        SymbolId mu = sig.symbol("mu");
        std::optional<SymbolId> unit = sig.find_symbol("e");
        Word wa = assoc_flatten(sig, mu, unit, a), wb = assoc_flatten(sig, mu, unit, b);
        if (P.name == "CMon") {
            std::sort(wa.begin(), wa.end());
            std::sort(wb.begin(), wb.end());
        }
        return wa == wb ? Tri::True : Tri::False;
    }
    case ParadigmKind::Linear:
        return linear_canonical(sig, a) == linear_canonical(sig, b) ? Tri::True : Tri::False;
    case ParadigmKind::Group:
        return group_reduce(leaf_signature(sig, a)) == group_reduce(leaf_signature(sig, b)) ? Tri::True
                                                                                            : Tri::False;
    case ParadigmKind::Generic: {
        if (P.name == "Mon" || P.name == "CMon") {
            SymbolId mu = sig.symbol("mu");
            std::optional<SymbolId> unit = sig.find_symbol("e");
            Word wa = assoc_flatten(sig, mu, unit, a), wb = assoc_flatten(sig, mu, unit, b);
            if (P.name == "CMon") {
                std::sort(wa.begin(), wa.end());
                std::sort(wb.begin(), wb.end());
            }
            return wa == wb ? Tri::True : Tri::False;
        }
        if (P.name == "GrpTilde")
            return group_reduce(leaf_signature(sig, a)) == group_reduce(leaf_signature(sig, b))
                       ? Tri::True
                       : Tri::False;
        if (P.name == "ModC")
            return linear_canonical(sig, a) == linear_canonical(sig, b) ? Tri::True : Tri::False;
        return equiv_generic(P, a, b, bounds);
    }
    }
    return Tri::Unknown;
}

Term canonical_key(const CartesianPolygraph& P, const ModuloSplit& split, ParadigmKind par, const Term& t,
                   const Bounds& bounds) {
    const Signature& sig = *P.signature;
    switch (par) {
    case ParadigmKind::String: {
        SymbolId mu = sig.symbol("mu");
        std::optional<SymbolId> unit = sig.find_symbol("e");
        return word_to_term(sig, mu, unit, assoc_flatten(sig, mu, unit, t));
    }
    case ParadigmKind::Linear:
        return polynomial_to_term(sig, linear_canonical(sig, t));
    case ParadigmKind::Group:
        return group_canonical(sig, t);
    case ParadigmKind::Generic: {
        ClassEnumeration cls = enumerate_class(P, split.unoriented, t, bounds.max_class);
        Term best = cls.members.front();
        for (const Term& m : cls.members)
            if (m < best) best = m;
        return best;
    }
    }
    return t;
}

} // namespace apm
