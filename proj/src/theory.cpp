#include "apm/theory.hpp"

#include <algorithm>

namespace apm {

namespace {

Term v(int i, SortId s = 0) { return Term::var(i, s); }

/// Small helper DSL for assembling builtin axioms.
struct Builder {
    CartesianPolygraph P;
    std::shared_ptr<Signature> sig;

    explicit Builder(std::string name) : sig(std::make_shared<Signature>()) { P.name = std::move(name); }

    SortId sort(const std::string& n) { return sig->add_sort(n); }
    SymbolId op(const std::string& n, std::vector<SortId> ar, SortId co) {
        return sig->add_symbol(n, std::move(ar), co);
    }
    void axiom(const std::string& n, Term l, Term r, bool modulo = false) {
        P.axioms.push_back(TheoryRule{n, std::move(l), std::move(r), modulo});
    }
    CartesianPolygraph done() {
        P.signature = sig;
        return P;
    }
};

Term bin(SymbolId f, Term a, Term b) { return Term::app(f, {std::move(a), std::move(b)}); }
Term un(SymbolId f, Term a) { return Term::app(f, {std::move(a)}); }
Term cst(SymbolId f) { return Term::app(f); }

void add_assoc(Builder& b, SymbolId f, const std::string& name, SortId s, bool modulo) {
    b.axiom(name, bin(f, bin(f, v(1, s), v(2, s)), v(3, s)), bin(f, v(1, s), bin(f, v(2, s), v(3, s))), modulo);
}
void add_comm(Builder& b, SymbolId f, const std::string& name, SortId s, bool modulo) {
    b.axiom(name, bin(f, v(1, s), v(2, s)), bin(f, v(2, s), v(1, s)), modulo);
}
void add_units(Builder& b, SymbolId f, SymbolId e, const std::string& suffix, SortId s) {
    b.axiom("E_l" + suffix, bin(f, cst(e), v(1, s)), v(1, s));
    b.axiom("E_r" + suffix, bin(f, v(1, s), cst(e)), v(1, s));
}
void add_inverses(Builder& b, SymbolId f, SymbolId e, SymbolId i, const std::string& suffix, SortId s) {
    b.axiom("I_l" + suffix, bin(f, un(i, v(1, s)), v(1, s)), cst(e));
    b.axiom("I_r" + suffix, bin(f, v(1, s), un(i, v(1, s))), cst(e));
}
void add_group_tilde(Builder& b, SymbolId mu, SymbolId e, SymbolId i, SortId s) {
    b.axiom("G1", un(i, cst(e)), cst(e));
    b.axiom("G2", un(i, un(i, v(1, s))), v(1, s));
    b.axiom("G3", un(i, bin(mu, v(1, s), v(2, s))), bin(mu, un(i, v(2, s)), un(i, v(1, s))));
    b.axiom("G4", bin(mu, v(1, s), bin(mu, un(i, v(1, s)), v(2, s))), v(2, s));
    b.axiom("G5", bin(mu, un(i, v(1, s)), bin(mu, v(1, s), v(2, s))), v(2, s));
}

/// Ring operations on sort r; shared by Ring/CRing/Mod/ModC.
struct RingOps {
    SymbolId add, zero, neg, mul, one;
};
RingOps add_ring_ops(Builder& b, SortId r) {
    RingOps o;
    o.add = b.op("add", {r, r}, r);
    o.zero = b.op("zero", {}, r);
    o.neg = b.op("neg", {r}, r);
    o.mul = b.op("mul", {r, r}, r);
    o.one = b.op("one", {}, r);
    return o;
}
void add_ring_axioms(Builder& b, const RingOps& o, SortId r, bool comm_mul) {
    add_assoc(b, o.add, "A_add", r, true);
    add_comm(b, o.add, "C_add", r, true);
    add_units(b, o.add, o.zero, "_add", r);
    add_inverses(b, o.add, o.zero, o.neg, "_add", r);
    add_assoc(b, o.mul, "A_mul", r, true);
    if (comm_mul) add_comm(b, o.mul, "C_mul", r, true);
    add_units(b, o.mul, o.one, "_mul", r);
    b.axiom("D_l", bin(o.mul, v(1, r), bin(o.add, v(2, r), v(3, r))),
            bin(o.add, bin(o.mul, v(1, r), v(2, r)), bin(o.mul, v(1, r), v(3, r))));
    b.axiom("D_r", bin(o.mul, bin(o.add, v(1, r), v(2, r)), v(3, r)),
            bin(o.add, bin(o.mul, v(1, r), v(3, r)), bin(o.mul, v(2, r), v(3, r))));
}

struct ModOps {
    RingOps ring;
    SymbolId oplus, ozero, oneg, act;
};
ModOps add_mod_ops(Builder& b, SortId r, SortId m) {
    ModOps o;
    o.ring = add_ring_ops(b, r);
    o.oplus = b.op("oplus", {m, m}, m);
    o.ozero = b.op("ozero", {}, m);
    o.oneg = b.op("oneg", {m}, m);
    o.act = b.op("act", {r, m}, m);
    return o;
}

CartesianPolygraph make_modc() {
    Builder b("ModC");
    SortId r = b.sort("r"), m = b.sort("m");
    ModOps o = add_mod_ops(b, r, m);
    const RingOps& g = o.ring;
    // oriented ring part
    b.axiom("ring1", bin(g.add, v(1, r), cst(g.zero)), v(1, r));
    b.axiom("ring2", bin(g.add, v(1, r), un(g.neg, v(1, r))), cst(g.zero));
    b.axiom("ring3", un(g.neg, cst(g.zero)), cst(g.zero));
    b.axiom("ring4", un(g.neg, un(g.neg, v(1, r))), v(1, r));
    b.axiom("ring5", un(g.neg, bin(g.add, v(1, r), v(2, r))), bin(g.add, un(g.neg, v(1, r)), un(g.neg, v(2, r))));
    b.axiom("ring6", bin(g.mul, v(1, r), bin(g.add, v(2, r), v(3, r))),
            bin(g.add, bin(g.mul, v(1, r), v(2, r)), bin(g.mul, v(1, r), v(3, r))));
    b.axiom("ring7", bin(g.mul, v(1, r), cst(g.zero)), cst(g.zero));
    b.axiom("ring8", bin(g.mul, v(1, r), un(g.neg, v(2, r))), un(g.neg, bin(g.mul, v(1, r), v(2, r))));
    b.axiom("ring9", bin(g.mul, cst(g.one), v(1, r)), v(1, r));
    // oriented module part
    b.axiom("mod1", bin(o.oplus, v(1, m), cst(o.ozero)), v(1, m));
    b.axiom("mod2", bin(o.act, v(1, r), bin(o.act, v(2, r), v(3, m))), bin(o.act, bin(g.mul, v(1, r), v(2, r)), v(3, m)));
    b.axiom("mod3", bin(o.act, cst(g.one), v(1, m)), v(1, m));
    b.axiom("mod4", bin(o.oplus, bin(o.act, v(1, r), v(3, m)), bin(o.act, v(2, r), v(3, m))),
            bin(o.act, bin(g.add, v(1, r), v(2, r)), v(3, m)));
    b.axiom("mod5", bin(o.act, v(1, r), bin(o.oplus, v(2, m), v(3, m))),
            bin(o.oplus, bin(o.act, v(1, r), v(2, m)), bin(o.act, v(1, r), v(3, m))));
    b.axiom("mod6", bin(o.oplus, v(1, m), bin(o.act, v(2, r), v(1, m))),
            bin(o.act, bin(g.add, cst(g.one), v(2, r)), v(1, m)));
    b.axiom("mod7", bin(o.oplus, v(1, m), v(1, m)), bin(o.act, bin(g.add, cst(g.one), cst(g.one)), v(1, m)));
    b.axiom("mod8", bin(o.act, v(1, r), cst(o.ozero)), cst(o.ozero));
    b.axiom("mod9", bin(o.act, cst(g.zero), v(1, m)), cst(o.ozero));
    b.axiom("mod10", un(o.oneg, v(1, m)), bin(o.act, un(g.neg, cst(g.one)), v(1, m)));
    // modulo part: AC for +, ·, ⊕
    add_assoc(b, g.add, "A_add", r, true);
    add_comm(b, g.add, "C_add", r, true);
    add_assoc(b, g.mul, "A_mul", r, true);
    add_comm(b, g.mul, "C_mul", r, true);
    add_assoc(b, o.oplus, "A_oplus", m, true);
    add_comm(b, o.oplus, "C_oplus", m, true);
    return b.done();
}

CartesianPolygraph make_mod() {
    Builder b("Mod");
    SortId r = b.sort("r"), m = b.sort("m");
    ModOps o = add_mod_ops(b, r, m);
    add_ring_axioms(b, o.ring, r, /*comm_mul=*/true);
    add_assoc(b, o.oplus, "A_oplus", m, true);
    add_comm(b, o.oplus, "C_oplus", m, true);
    add_units(b, o.oplus, o.ozero, "_oplus", m);
    add_inverses(b, o.oplus, o.ozero, o.oneg, "_oplus", m);
    const RingOps& g = o.ring;
    b.axiom("M1", bin(o.act, bin(g.add, v(1, r), v(2, r)), v(3, m)),
            bin(o.oplus, bin(o.act, v(1, r), v(3, m)), bin(o.act, v(2, r), v(3, m))));
    b.axiom("M2", bin(o.act, bin(g.mul, v(1, r), v(2, r)), v(3, m)), bin(o.act, v(1, r), bin(o.act, v(2, r), v(3, m))));
    b.axiom("M3", bin(o.act, v(1, r), bin(o.oplus, v(2, m), v(3, m))),
            bin(o.oplus, bin(o.act, v(1, r), v(2, m)), bin(o.act, v(1, r), v(3, m))));
    b.axiom("M4", bin(o.act, cst(g.one), v(1, m)), v(1, m));
    return b.done();
}

} // namespace

bool is_assoc_axiom(const TheoryRule& r) {
    const Term &l = r.lhs, &rr = r.rhs;
    if (!l.is_app() || !rr.is_app()) return false;
    SymbolId f = l.symbol();
    if (rr.symbol() != f || l.args().size() != 2 || rr.args().size() != 2) return false;
    // (x1 f x2) f x3  =>  x1 f (x2 f x3)
    const Term& ll = l.args()[0];
    const Term& rrr = rr.args()[1];
    return ll.is_app() && ll.symbol() == f && l.args()[1].is_var() && rr.args()[0].is_var() && rrr.is_app() &&
           rrr.symbol() == f && ll.args()[0].is_var() && ll.args()[1].is_var() && rrr.args()[0].is_var() &&
           rrr.args()[1].is_var() && ll.args()[0].var_index() == rr.args()[0].var_index() &&
           ll.args()[1].var_index() == rrr.args()[0].var_index() &&
           l.args()[1].var_index() == rrr.args()[1].var_index();
}

bool is_comm_axiom(const TheoryRule& r) {
    const Term &l = r.lhs, &rr = r.rhs;
    if (!l.is_app() || !rr.is_app()) return false;
    SymbolId f = l.symbol();
    if (rr.symbol() != f || l.args().size() != 2 || rr.args().size() != 2) return false;
    return l.args()[0].is_var() && l.args()[1].is_var() && rr.args()[0].is_var() && rr.args()[1].is_var() &&
           l.args()[0].var_index() == rr.args()[1].var_index() &&
           l.args()[1].var_index() == rr.args()[0].var_index() &&
           l.args()[0].var_index() != l.args()[1].var_index();
}

SymbolId ac_axiom_symbol(const TheoryRule& r) { return r.lhs.symbol(); }

CartesianPolygraph builtin_theory(const std::string& name) {
    if (name == "Mag") {
        Builder b("Mag");
        SortId m = b.sort("m");
        b.op("mu", {m, m}, m);
        return b.done();
    }
    if (name == "Ass") {
        Builder b("Ass");
        SortId m = b.sort("m");
        SymbolId mu = b.op("mu", {m, m}, m);
        add_assoc(b, mu, "A", m, true);
        return b.done();
    }
    if (name == "AC") {
        Builder b("AC");
        SortId m = b.sort("m");
        SymbolId mu = b.op("mu", {m, m}, m);
        add_assoc(b, mu, "A", m, true);
        add_comm(b, mu, "C", m, true);
        return b.done();
    }
    if (name == "Mon" || name == "CMon") {
        Builder b(name);
        SortId m = b.sort("m");
        SymbolId mu = b.op("mu", {m, m}, m);
        SymbolId e = b.op("e", {}, m);
        add_assoc(b, mu, "A", m, true);
        if (name == "CMon") add_comm(b, mu, "C", m, true);
        add_units(b, mu, e, "", m);
        return b.done();
    }
    if (name == "Grp" || name == "Ab") {
        Builder b(name);
        SortId m = b.sort("m");
        SymbolId mu = b.op("mu", {m, m}, m);
        SymbolId e = b.op("e", {}, m);
        SymbolId i = b.op("inv", {m}, m);
        add_assoc(b, mu, "A", m, true);
        if (name == "Ab") add_comm(b, mu, "C", m, true);
        add_units(b, mu, e, "", m);
        add_inverses(b, mu, e, i, "", m);
        return b.done();
    }
    if (name == "GrpTilde") {
        Builder b("GrpTilde");
        SortId m = b.sort("m");
        SymbolId mu = b.op("mu", {m, m}, m);
        SymbolId e = b.op("e", {}, m);
        SymbolId i = b.op("inv", {m}, m);
        add_assoc(b, mu, "A", m, true);
        add_units(b, mu, e, "", m);
        add_group_tilde(b, mu, e, i, m);
        return b.done();
    }
    if (name == "Ring" || name == "CRing") {
        Builder b(name);
        SortId r = b.sort("r");
        RingOps o = add_ring_ops(b, r);
        add_ring_axioms(b, o, r, name == "CRing");
        return b.done();
    }
    if (name == "Mod") return make_mod();
    if (name == "ModC") return make_modc();
    fail(ErrorCode::UnknownTheory, "no builtin theory named '" + name + "'");
}

std::vector<std::string> builtin_theory_names() {
    return {"Mag", "Ass", "AC", "Mon", "CMon", "Grp", "GrpTilde", "Ab", "Ring", "CRing", "Mod", "ModC"};
}

CartesianPolygraph extend_with_constants(const CartesianPolygraph& P,
                                         const std::vector<std::pair<std::string, std::string>>& constants,
                                         std::vector<SymbolId>* new_ids) {
    auto sig = std::make_shared<Signature>(*P.signature);
    if (new_ids) new_ids->clear();
    for (const auto& [name, sort] : constants) {
        auto s = sig->find_sort(sort);
        if (!s) fail(ErrorCode::SortMismatch, "unknown sort '" + sort + "' for constant '" + name + "'");
        SymbolId id = sig->add_symbol(name, {}, *s);
        if (new_ids) new_ids->push_back(id);
    }
    CartesianPolygraph out = P;
    out.signature = sig;
    return out;
}

ModuloSplit modulo_split(const CartesianPolygraph& P) {
    ModuloSplit out;
    for (const TheoryRule& r : P.axioms) {
        if (r.modulo) {
            if (!is_assoc_axiom(r) && !is_comm_axiom(r))
                fail(ErrorCode::UnsupportedModuloTheory,
                     "unoriented axiom '" + r.name + "' of theory " + P.name +
                         " is neither an associativity nor a commutativity axiom");
            out.unoriented.push_back(r);
        } else {
            out.oriented.push_back(r);
        }
    }
    return out;
}

namespace {

void collect_unbound(const Term& side, const Substitution& s, std::vector<std::pair<int, SortId>>& out) {
    if (side.is_var()) {
        if (!s.count(side.var_index())) out.emplace_back(side.var_index(), side.var_sort());
    } else if (side.is_app()) {
        for (const Term& a : side.args()) collect_unbound(a, s, out);
    }
}

} // namespace

std::vector<GroundAxiomInstance> groundify_matches(const CartesianPolygraph& P,
                                                   const std::vector<TheoryRule>& axioms, const Term& t,
                                                   const std::vector<Term>& pool) {
    const Signature& sig = *P.signature;
    std::vector<GroundAxiomInstance> out;
    auto positions = enumerate_positions(t);
    for (const auto& [pos, sub] : positions) {
        for (const TheoryRule& ax : axioms) {
            for (bool forward : {true, false}) {
                const Term& from_pat = forward ? ax.lhs : ax.rhs;
                const Term& to_pat = forward ? ax.rhs : ax.lhs;
                auto m = match(from_pat, sub);
                if (!m) continue;
                std::vector<std::pair<int, SortId>> unbound;
                collect_unbound(to_pat, *m, unbound);
                std::sort(unbound.begin(), unbound.end());
                unbound.erase(std::unique(unbound.begin(), unbound.end()), unbound.end());
                // candidate fillers per unbound variable, sort-filtered
                std::vector<std::vector<Term>> choices;
                bool feasible = true;
                for (auto [vi, vs] : unbound) {
                    std::vector<Term> c;
                    if (pool.empty()) {
                        for (SymbolId f : sig.constants(vs)) c.push_back(Term::app(f));
                    } else {
                        for (const Term& cand : pool)
                            if (typecheck_term(sig, cand) == vs) c.push_back(cand);
                    }
                    if (c.empty()) {
                        feasible = false;
                        break;
                    }
                    choices.push_back(std::move(c));
                }
                if (!feasible) continue;
                // cartesian product over the (few) unbound variables
                std::vector<std::size_t> idx(unbound.size(), 0);
                for (;;) {
                    Substitution full = *m;
                    for (std::size_t k = 0; k < unbound.size(); ++k) full[unbound[k].first] = choices[k][idx[k]];
                    out.push_back(GroundAxiomInstance{Context::at(sig, t, pos), ax.name, forward,
                                                      substitute(from_pat, full), substitute(to_pat, full)});
                    std::size_t k = 0;
                    while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
                    if (k == idx.size() && !idx.empty()) break;
                    if (idx.empty()) break;
                }
            }
        }
    }
    return out;
}

std::vector<GroundAxiomInstance> groundify_matches(const CartesianPolygraph& P, const Term& t,
                                                   const std::vector<Term>& pool) {
    return groundify_matches(P, P.axioms, t, pool);
}

} // namespace apm
