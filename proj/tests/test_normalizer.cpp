#include "doctest.h"

#include <algorithm>

#include "apm/normalizer.hpp"
#include "apm/theory.hpp"
#include "oracles.hpp"

using namespace apm;

namespace {

struct MonFix {
    CartesianPolygraph P;
    ModuloSplit split;
    SymbolId s, t, mu, e;

    MonFix() {
        std::vector<SymbolId> ids;
        P = extend_with_constants(builtin_theory("Mon"), {{"s", "m"}, {"t", "m"}}, &ids);
        split = modulo_split(P);
        s = ids[0];
        t = ids[1];
        mu = P.signature->symbol("mu");
        e = P.signature->symbol("e");
    }
    Term c(SymbolId q) const { return Term::app(q); }
    Term m2(Term a, Term b) const { return Term::app(mu, {std::move(a), std::move(b)}); }

    Term random_term(std::mt19937_64& gen, int depth) const {
        std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 2);
        switch (pick(gen)) {
        case 0: return c(s);
        case 1: return c(t);
        case 2: return c(e);
        default: {
            Term a = random_term(gen, depth - 1);
            Term b = random_term(gen, depth - 1);
            return m2(std::move(a), std::move(b));
        }
        }
    }
};

struct GrpFix {
    CartesianPolygraph P;
    ModuloSplit split;
    SymbolId s, t, mu, e, inv;

    GrpFix() {
        std::vector<SymbolId> ids;
        P = extend_with_constants(builtin_theory("GrpTilde"), {{"s", "m"}, {"t", "m"}}, &ids);
        split = modulo_split(P);
        s = ids[0];
        t = ids[1];
        mu = P.signature->symbol("mu");
        e = P.signature->symbol("e");
        inv = P.signature->symbol("inv");
    }
    Term c(SymbolId q) const { return Term::app(q); }
    Term m2(Term a, Term b) const { return Term::app(mu, {std::move(a), std::move(b)}); }
    Term i(Term a) const { return Term::app(inv, {std::move(a)}); }

    Term random_term(std::mt19937_64& gen, int depth) const {
        std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 2);
        switch (pick(gen)) {
        case 0: return c(s);
        case 1: return c(t);
        case 2: return c(e);
        case 3: return i(random_term(gen, depth - 1));
        default:
            return m2(random_term(gen, depth - 1), random_term(gen, depth - 1));
        }
    }
};

struct ModcFix {
    CartesianPolygraph P;
    ModuloSplit split;
    SymbolId a, b, c3;
    LinearView v;

    ModcFix() : v{} {
        std::vector<SymbolId> ids;
        P = extend_with_constants(builtin_theory("ModC"), {{"a", "m"}, {"b", "m"}, {"c", "m"}}, &ids);
        split = modulo_split(P);
        a = ids[0];
        b = ids[1];
        c3 = ids[2];
        v = linear_view(*P.signature);
    }

    Term random_scalar(std::mt19937_64& gen, int depth) const {
        std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 1);
        switch (pick(gen)) {
        case 0: return Term::app(v.zero);
        case 1: return Term::app(v.one);
        case 2: return Term::app(v.neg, {random_scalar(gen, depth - 1)});
        case 3:
            return Term::app(v.add, {random_scalar(gen, depth - 1), random_scalar(gen, depth - 1)});
        default:
            return Term::app(v.mul, {random_scalar(gen, depth - 1), random_scalar(gen, depth - 1)});
        }
    }
    Term random_module(std::mt19937_64& gen, int depth) const {
        std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 3);
        switch (pick(gen)) {
        case 0: return Term::app(a);
        case 1: return Term::app(b);
        case 2: return Term::app(c3);
        case 3: return Term::app(v.ozero);
        case 4: return Term::app(v.oneg, {random_module(gen, depth - 1)});
        case 5:
            return Term::app(v.act, {random_scalar(gen, depth - 1), random_module(gen, depth - 1)});
        default:
            return Term::app(v.oplus, {random_module(gen, depth - 1), random_module(gen, depth - 1)});
        }
    }
};

} // namespace

TEST_CASE("assoc_flatten and word_to_term") {
    MonFix f;
    const Signature& sig = *f.P.signature;
    Term t = f.m2(f.m2(f.c(f.s), f.c(f.e)), f.m2(f.c(f.t), f.c(f.s)));
    Word w = assoc_flatten(sig, f.mu, f.e, t);
    CHECK(w == Word{f.s, f.t, f.s});
    CHECK(assoc_flatten(sig, f.mu, f.e, word_to_term(sig, f.mu, f.e, w)) == w);
    CHECK(word_to_term(sig, f.mu, f.e, Word{}) == f.c(f.e));
    CHECK_THROWS_AS(word_to_term(sig, f.mu, std::nullopt, Word{}), Error);
    // without unit erasure e is an ordinary letter
    CHECK(assoc_flatten(sig, f.mu, std::nullopt, t) == Word{f.s, f.e, f.t, f.s});
    CHECK_THROWS_AS(assoc_flatten(sig, f.mu, f.e, Term::var(1, 0)), Error);
}

TEST_CASE("ac_canonical is constant on bounded AC classes") {
    std::vector<SymbolId> ids;
    CartesianPolygraph P = extend_with_constants(builtin_theory("AC"), {{"s", "m"}, {"t", "m"}, {"u", "m"}}, &ids);
    ModuloSplit split = modulo_split(P);
    auto as = assoc_symbols(split), cs = comm_symbols(split);
    SymbolId mu = P.signature->symbol("mu");
    auto gen = oracle::rng(41);
    std::uniform_int_distribution<int> pick(0, 3);

    std::function<Term(int)> rnd = [&](int depth) -> Term {
        int k = pick(gen);
        if (depth == 0 || k < 3) return Term::app(ids[k % 3]);
        return Term::app(mu, {rnd(depth - 1), rnd(depth - 1)});
    };
    for (int trial = 0; trial < 60; ++trial) {
        Term t = rnd(3);
        Term canon = ac_canonical(t, as, cs);
        CHECK(ac_canonical(canon, as, cs) == canon); // idempotent
        for (const Term& member : oracle::o_closure(P.axioms, t, 80))
            CHECK(ac_canonical(member, as, cs) == canon);
    }
}

TEST_CASE("leaf_signature pushes inversions down and keeps the trailing pair") {
    GrpFix f;
    const Signature& sig = *f.P.signature;
    // (st)⁻ s reads t⁻ s⁻ s; the cancelling pair is final, so it stays
    Term t1 = f.m2(f.i(f.m2(f.c(f.s), f.c(f.t))), f.c(f.s));
    SignedWord w1 = leaf_signature(sig, t1);
    CHECK(w1 == SignedWord{{f.t, true}, {f.s, true}, {f.s, false}});
    CHECK(group_reduce(w1) == SignedWord{{f.t, true}});

    // (s s⁻) t cancels: the pair has the successor t
    Term t2 = f.m2(f.m2(f.c(f.s), f.i(f.c(f.s))), f.c(f.t));
    CHECK(leaf_signature(sig, t2) == SignedWord{{f.t, false}});

    // units vanish, double inversion flips back
    Term t3 = f.m2(f.c(f.e), f.i(f.i(f.c(f.t))));
    CHECK(leaf_signature(sig, t3) == SignedWord{{f.t, false}});

    SUBCASE("group_canonical rebuilds the freely reduced word") {
        CHECK(group_canonical(sig, t1) == f.i(f.c(f.t)));
        CHECK(group_canonical(sig, f.m2(f.c(f.s), f.i(f.c(f.s)))) == f.c(f.e));
    }
    SUBCASE("signed_word_to_term round-trips") {
        auto gen = oracle::rng(43);
        std::uniform_int_distribution<int> len(0, 6), letter(0, 3);
        for (int trial = 0; trial < 100; ++trial) {
            SignedWord w;
            int n = len(gen);
            for (int i = 0; i < n; ++i) {
                int k = letter(gen);
                w.push_back(Letter{k % 2 == 0 ? f.s : f.t, k >= 2});
            }
            Term t = signed_word_to_term(sig, w);
            CHECK(group_reduce(leaf_signature(sig, t)) == group_reduce(w));
            // an already-reduced word reads back verbatim
            SignedWord red = group_reduce(w);
            CHECK(leaf_signature(sig, signed_word_to_term(sig, red)) == red);
        }
    }
}

TEST_CASE("scalar evaluation and numeral encoding") {
    ModcFix f;
    const Signature& sig = *f.P.signature;
    auto gen = oracle::rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        Term s = f.random_scalar(gen, 3);
        Coeff c = eval_scalar(sig, s);
        CHECK(eval_scalar(sig, coeff_to_term(sig, c)) == c);
    }
    CHECK(eval_scalar(sig, coeff_to_term(sig, -3)) == -3);
    CHECK(coeff_to_term(sig, 0) == Term::app(f.v.zero));
    CHECK(coeff_to_term(sig, 1) == Term::app(f.v.one));
    CHECK_THROWS_AS(coeff_to_term(sig, Coeff(1) / 2), Error);
}

TEST_CASE("linear_canonical and polynomial_to_term are mutually inverse") {
    ModcFix f;
    const Signature& sig = *f.P.signature;
    auto gen = oracle::rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        Term t = f.random_module(gen, 3);
        Polynomial p = linear_canonical(sig, t);
        Term rebuilt = polynomial_to_term(sig, p);
        CHECK(linear_canonical(sig, rebuilt) == p);
    }
    CHECK(polynomial_to_term(sig, Polynomial::zero()) == Term::app(f.v.ozero));
}

TEST_CASE("modc candidate enumeration makes progress exactly when needed") {
    ModcFix f;
    const Signature& sig = *f.P.signature;
    auto as = assoc_symbols(f.split), cs = comm_symbols(f.split);
    auto gen = oracle::rng(59);
    for (int trial = 0; trial < 300; ++trial) {
        Term t = f.random_module(gen, 3);
        auto cands = modc_candidates(sig, t);
        if (cands.empty()) {
            // no candidate: t must already be an AC arrangement of its canon
            CHECK(ac_canonical(t, as, cs) ==
                  ac_canonical(polynomial_to_term(sig, linear_canonical(sig, t)), as, cs));
        } else {
            for (const ModcCandidate& c : cands) {
                // arranged stays in the AC class, the redex is where promised
                CHECK(ac_canonical(c.arranged, as, cs) == ac_canonical(t, as, cs));
                CHECK(subterm_at(c.arranged, c.pos) == c.from);
                CHECK(replace_at(c.arranged, c.pos, c.to) == c.result);
                // the step preserves the polynomial value
                CHECK(linear_canonical(sig, c.result) == linear_canonical(sig, t));
            }
        }
    }
}

TEST_CASE("modc measure certificate") {
    ModcFix f;
    const Signature& sig = *f.P.signature;
    auto as = assoc_symbols(f.split), cs = comm_symbols(f.split);
    auto gen = oracle::rng(61);
    int steps_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Term t = f.random_module(gen, 3);
        // AC invariance
        CHECK(!(modc_measure(sig, t) < modc_measure(sig, ac_canonical(t, as, cs))));
        CHECK(!(modc_measure(sig, ac_canonical(t, as, cs)) < modc_measure(sig, t)));
        for (const ModcCandidate& c : modc_candidates(sig, t)) {
            CHECK(modc_measure(sig, c.result) < modc_measure(sig, c.arranged));
            ++steps_seen;
        }
    }
    CHECK(steps_seen > 100); // the generator must actually exercise the rules
}

TEST_CASE("group measure certificate") {
    GrpFix f;
    const Signature& sig = *f.P.signature;
    auto gen = oracle::rng(67);
    ModuloSplit split = modulo_split(f.P);
    int steps_seen = 0;
    for (int trial = 0; trial < 600; ++trial) {
        Term t = f.random_term(gen, 3);
        for (const GroundAxiomInstance& inst : groundify_matches(f.P, split.oriented, t)) {
            if (!inst.forward) continue;
            Term next = inst.ctx.apply(inst.to);
            CHECK(group_measure(sig, next) < group_measure(sig, t));
            ++steps_seen;
        }
        // associativity leaves the measure alone
        for (const GroundAxiomInstance& inst : groundify_matches(f.P, split.unoriented, t)) {
            Term next = inst.ctx.apply(inst.to);
            CHECK(group_measure(sig, next) == group_measure(sig, t));
        }
    }
    CHECK(steps_seen > 100);
}

TEST_CASE("ac_bridge connects AC-equal terms by a replayable trace") {
    ModcFix f;
    auto as = assoc_symbols(f.split), cs = comm_symbols(f.split);
    auto gen = oracle::rng(71);
    std::vector<TheoryRule> ac_axioms = f.split.unoriented;
    for (int trial = 0; trial < 60; ++trial) {
        Term t = f.random_module(gen, 2);
        auto members = oracle::o_closure(ac_axioms, t, 40);
        for (const Term& m : members) {
            EquivTrace br = ac_bridge(f.P, f.split, t, m);
            CHECK(apply_trace(t, br) == m);
            for (const EquivStep& s : br) {
                bool is_ac_axiom = false;
                for (const TheoryRule& ax : ac_axioms) is_ac_axiom |= (ax.name == s.axiom);
                CHECK(is_ac_axiom);
            }
        }
    }
    SUBCASE("inequivalent terms are rejected") {
        CHECK_THROWS_AS(ac_bridge(f.P, f.split, Term::app(f.a), Term::app(f.b)), Error);
    }
}

TEST_CASE("canonical_trace: string paradigm") {
    MonFix f;
    const Signature& sig = *f.P.signature;
    auto gen = oracle::rng(73);
    for (int trial = 0; trial < 200; ++trial) {
        Term t = f.random_term(gen, 3);
        TracedTerm tt = canonical_trace(f.P, f.split, ParadigmKind::String, t);
        CHECK(apply_trace(t, tt.trace) == tt.result);
        CHECK(tt.result == word_to_term(sig, f.mu, f.e, assoc_flatten(sig, f.mu, f.e, t)));
    }
}

TEST_CASE("canonical_trace: group paradigm") {
    GrpFix f;
    const Signature& sig = *f.P.signature;
    auto gen = oracle::rng(79);
    for (int trial = 0; trial < 200; ++trial) {
        Term t = f.random_term(gen, 3);
        TracedTerm tt = canonical_trace(f.P, f.split, ParadigmKind::Group, t);
        CHECK(apply_trace(t, tt.trace) == tt.result);
        CHECK(tt.result == group_canonical(sig, t));
    }
}

TEST_CASE("canonical_trace: linear paradigm") {
    ModcFix f;
    const Signature& sig = *f.P.signature;
    auto gen = oracle::rng(83);
    for (int trial = 0; trial < 120; ++trial) {
        Term t = f.random_module(gen, 3);
        TracedTerm tt = canonical_trace(f.P, f.split, ParadigmKind::Linear, t);
        CHECK(apply_trace(t, tt.trace) == tt.result);
        CHECK(tt.result == polynomial_to_term(sig, linear_canonical(sig, t)));
    }
}

TEST_CASE("enumerate_class matches the naive closure") {
    MonFix f;
    auto gen = oracle::rng(89);
    for (int trial = 0; trial < 40; ++trial) {
        Term t = f.random_term(gen, 2);
        ClassEnumeration cls = enumerate_class(f.P, f.split.unoriented, t, 512);
        REQUIRE(cls.complete);
        std::set<Term> ours(cls.members.begin(), cls.members.end());
        CHECK(ours == oracle::o_closure(f.split.unoriented, t, 4096));
        CHECK(cls.members[0] == t);
        for (std::size_t i = 0; i < cls.members.size(); ++i)
            CHECK(apply_trace(t, cls.traces[i]) == cls.members[i]);
    }
    SUBCASE("bound truncates and reports incompleteness") {
        Term big = f.random_term(gen, 4);
        ClassEnumeration cls = enumerate_class(f.P, f.split.unoriented, big, 2);
        if (!cls.complete) CHECK(cls.members.size() <= 2);
    }
}

TEST_CASE("insertion_expansions") {
    GrpFix f;
    SignedWord w{{f.s, false}};
    WordExpansion e0 = insertion_expansions(w, {f.s, f.t}, 0);
    CHECK(e0.words.size() == 1);
    CHECK(e0.complete);

    WordExpansion e1 = insertion_expansions(w, {f.s, f.t}, 1);
    CHECK(!e1.complete);
    // 2 positions x 2 letters x 2 orders = 8, minus duplicates
    CHECK(e1.words.size() > 4);
    CHECK(e1.words.size() <= 9);
    for (const SignedWord& x : e1.words) CHECK(oracle::o_free_reduce(x) == w);

    WordExpansion e2 = insertion_expansions(w, {f.s, f.t}, 2);
    CHECK(e2.words.size() > e1.words.size());
    for (const SignedWord& x : e2.words) CHECK(oracle::o_free_reduce(x) == w);
}

TEST_CASE("equiv_modulo per paradigm") {
    SUBCASE("string") {
        MonFix f;
        Term a = f.m2(f.m2(f.c(f.s), f.c(f.e)), f.c(f.t));
        Term b = f.m2(f.c(f.s), f.c(f.t));
        CHECK(equiv_modulo(f.P, ParadigmKind::String, a, b) == Tri::True);
        CHECK(equiv_modulo(f.P, ParadigmKind::String, a, f.c(f.s)) == Tri::False);
    }
    SUBCASE("group") {
        GrpFix f;
        Term a = f.m2(f.c(f.s), f.m2(f.i(f.c(f.s)), f.c(f.t)));
        CHECK(equiv_modulo(f.P, ParadigmKind::Group, a, f.c(f.t)) == Tri::True);
        CHECK(equiv_modulo(f.P, ParadigmKind::Group, a, f.c(f.s)) == Tri::False);
    }
    SUBCASE("linear") {
        ModcFix f;
        Term two_a = Term::app(f.v.oplus, {Term::app(f.a), Term::app(f.a)});
        Term two_a2 = Term::app(f.v.act,
                                {Term::app(f.v.add, {Term::app(f.v.one), Term::app(f.v.one)}),
                                 Term::app(f.a)});
        CHECK(equiv_modulo(f.P, ParadigmKind::Linear, two_a, two_a2) == Tri::True);
        CHECK(equiv_modulo(f.P, ParadigmKind::Linear, two_a, Term::app(f.a)) == Tri::False);
    }
    SUBCASE("generic pure AC is exact") {
        std::vector<SymbolId> ids;
        CartesianPolygraph P = extend_with_constants(builtin_theory("AC"), {{"s", "m"}, {"t", "m"}}, &ids);
        SymbolId mu = P.signature->symbol("mu");
        Term st = Term::app(mu, {Term::app(ids[0]), Term::app(ids[1])});
        Term ts = Term::app(mu, {Term::app(ids[1]), Term::app(ids[0])});
        CHECK(equiv_modulo(P, ParadigmKind::Generic, st, ts) == Tri::True);
        CHECK(equiv_modulo(P, ParadigmKind::Generic, st, Term::app(ids[0])) == Tri::False);
    }
    SUBCASE("generic Mon decides by words") {
        MonFix f;
        Term a = f.m2(f.c(f.e), f.c(f.s));
        CHECK(equiv_modulo(f.P, ParadigmKind::Generic, a, f.c(f.s)) == Tri::True);
    }
    SUBCASE("generic bounded search can return Unknown") {
        std::vector<SymbolId> ids;
        CartesianPolygraph P = extend_with_constants(builtin_theory("Grp"), {{"s", "m"}}, &ids);
        Bounds tight;
        tight.max_class = 4;
        Term s = Term::app(ids[0]);
        Term deep = s;
        SymbolId mu = P.signature->symbol("mu"), e = P.signature->symbol("e");
        for (int i = 0; i < 3; ++i) deep = Term::app(mu, {Term::app(e), deep});
        CHECK(equiv_modulo(P, ParadigmKind::Generic, s, deep, tight) != Tri::False);
    }
}

TEST_CASE("canonical_key collapses classes and nothing else") {
    MonFix f;
    auto gen = oracle::rng(97);
    Bounds bounds;
    for (int trial = 0; trial < 60; ++trial) {
        Term t = f.random_term(gen, 2);
        Term key = canonical_key(f.P, f.split, ParadigmKind::String, t, bounds);
        CHECK(canonical_key(f.P, f.split, ParadigmKind::String, key, bounds) == key);
        for (const Term& m : oracle::o_closure(f.split.unoriented, t, 30))
            CHECK(canonical_key(f.P, f.split, ParadigmKind::String, m, bounds) == key);
    }
    SUBCASE("generic keys never merge distinct AC classes") {
        std::vector<SymbolId> ids;
        CartesianPolygraph P = extend_with_constants(builtin_theory("AC"), {{"s", "m"}, {"t", "m"}}, &ids);
        ModuloSplit split = modulo_split(P);
        SymbolId mu = P.signature->symbol("mu");
        Term st = Term::app(mu, {Term::app(ids[0]), Term::app(ids[1])});
        Term ts = Term::app(mu, {Term::app(ids[1]), Term::app(ids[0])});
        Bounds bounds2;
        CHECK(canonical_key(P, split, ParadigmKind::Generic, st, bounds2) ==
              canonical_key(P, split, ParadigmKind::Generic, ts, bounds2));
        CHECK(canonical_key(P, split, ParadigmKind::Generic, st, bounds2) !=
              canonical_key(P, split, ParadigmKind::Generic, Term::app(ids[0]), bounds2));
    }
}
