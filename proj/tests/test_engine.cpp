#include "doctest.h"

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "apm/engine.hpp"
#include "apm/paradigm.hpp"
#include "oracles.hpp"

using namespace apm;

namespace {

System make_sys(CartesianPolygraph P, ParadigmKind par, std::vector<SymbolId> consts,
                std::vector<GroundRule> rules, StepPolicy pol = StepPolicy::EPRE, Bounds b = {}) {
    System sys;
    sys.apm = make_apm(std::move(P), std::move(consts), std::move(rules), pol);
    sys.paradigm = par;
    sys.bounds = b;
    return sys;
}

struct StrFix {
    CartesianPolygraph P;
    SymbolId s, t, mu;
    ParadigmSpec spec{ParadigmKind::String};

    StrFix() {
        std::vector<SymbolId> ids;
        P = extend_with_constants(builtin_theory("Mon"), {{"s", "m"}, {"t", "m"}}, &ids);
        s = ids[0];
        t = ids[1];
        mu = P.signature->symbol("mu");
    }
    Term c(SymbolId q) const { return Term::app(q); }
    Term m2(Term a, Term b) const { return Term::app(mu, {std::move(a), std::move(b)}); }
    Term w(const std::string& text) const { return parse_native(spec, P, text); }
    System braid(StepPolicy pol = StepPolicy::EPRE) const {
        GroundRule r = parse_native_rule(spec, P, "b3", "sts => tst");
        return make_sys(P, ParadigmKind::String, {s, t}, validate_rules(spec, P, {r}).rules, pol);
    }
    Word flat(const Term& u) const {
        return assoc_flatten(*P.signature, mu, P.signature->find_symbol("e"), u);
    }
};

struct GrpFix {
    CartesianPolygraph P;
    SymbolId s, t;
    ParadigmSpec spec{ParadigmKind::Group};

    GrpFix() {
        std::vector<SymbolId> ids;
        P = extend_with_constants(builtin_theory("GrpTilde"), {{"s", "m"}, {"t", "m"}}, &ids);
        s = ids[0];
        t = ids[1];
    }
    Term w(const std::string& text) const { return parse_native(spec, P, text); }
    SignedWord red(const Term& u) const { return group_reduce(leaf_signature(*P.signature, u)); }
    System braid() const {
        GroundRule r = parse_native_rule(spec, P, "b3", "s t s => t s t");
        return make_sys(P, ParadigmKind::Group, {s, t}, validate_rules(spec, P, {r}).rules);
    }
};

struct LinFix {
    CartesianPolygraph P;
    SymbolId x, y, z, t;
    ParadigmSpec spec{ParadigmKind::Linear};

    LinFix() {
        std::vector<SymbolId> ids;
        P = extend_with_constants(linear_host_theory(),
                                  {{"x", "m"}, {"y", "m"}, {"z", "m"}, {"t", "m"}}, &ids);
        x = ids[0];
        y = ids[1];
        z = ids[2];
        t = ids[3];
    }
    Term w(const std::string& text) const { return parse_native(spec, P, text); }
    Polynomial poly(const Term& u) const { return linear_canonical(*P.signature, u); }
    System intro() const {
        GroundRule a = parse_native_rule(spec, P, "alpha", "xy => xz");
        GroundRule b = parse_native_rule(spec, P, "beta", "zt => 2*yt");
        return make_sys(P, ParadigmKind::Linear, {x, y, z, t},
                        validate_rules(spec, P, {a, b}).rules);
    }
};

/// Letters strictly left of the rewritten window in the step's display.
std::size_t window_of(const StrFix& f, const RewritingStep& st) {
    Term display = apply_trace(st.source, st.pre);
    REQUIRE(display == st.ctx.apply(st.rule.lhs));
    std::size_t off = 0;
    Term cur = display;
    for (std::uint32_t i : st.ctx.hole_position().path) {
        if (i == 2) off += f.flat(cur.args()[0]).size();
        cur = cur.args()[i - 1];
    }
    return off;
}

} // namespace

TEST_CASE("make_apm validates rules and generators") {
    StrFix f;
    GroundRule open{"o", Term::var(1, f.P.signature->sort("m")), f.c(f.s)};
    CHECK_THROWS_AS(make_apm(f.P, {f.s}, {open}), const Error&);
    CHECK_THROWS_AS(make_apm(f.P, {f.mu}, {}), const Error&);

    LinFix lf;
    GroundRule skew{"k", Term::app(lf.x), Term::app(lf.P.signature->symbol("one"))};
    try {
        make_apm(lf.P, {lf.x}, {skew});
        FAIL("expected SortMismatch");
    } catch (const Error& e) {
        CHECK(e.code == ErrorCode::SortMismatch);
    }
}

TEST_CASE("step discovery reproduces the braid arrangement pair") {
    StrFix f;
    System sys = f.braid();
    // (s·((s·t)·s))·t  ==>  (s·(t·(s·t)))·t, bit-exact display
    Term src = f.m2(f.m2(f.c(f.s), f.m2(f.m2(f.c(f.s), f.c(f.t)), f.c(f.s))), f.c(f.t));
    Term expect = f.m2(f.m2(f.c(f.s), f.m2(f.c(f.t), f.m2(f.c(f.s), f.c(f.t)))), f.c(f.t));
    bool exact = false;
    for (const RewritingStep& st : find_redexes(sys, src)) {
        CHECK(st.source == src);
        CHECK(apply_step(st) == st.target);
        if (st.target == expect) exact = true;
    }
    CHECK(exact);

    // (s·(s·(t·s)))·t ==> something arranged like ((s·t)·(s·t))·t
    Term src2 = f.m2(f.m2(f.c(f.s), f.m2(f.c(f.s), f.m2(f.c(f.t), f.c(f.s)))), f.c(f.t));
    Word want = f.flat(f.m2(f.m2(f.m2(f.c(f.s), f.c(f.t)), f.m2(f.c(f.s), f.c(f.t))), f.c(f.t)));
    bool found = false;
    for (const RewritingStep& st : find_redexes(sys, src2))
        if (f.flat(st.target) == want) found = true;
    CHECK(found);
}

TEST_CASE("policy R keeps only syntactic redexes") {
    StrFix f;
    System sys = f.braid(StepPolicy::R);
    Term skew = f.m2(f.m2(f.c(f.s), f.m2(f.m2(f.c(f.s), f.c(f.t)), f.c(f.s))), f.c(f.t));
    CHECK(find_redexes(sys, skew).empty());

    Term direct = f.m2(f.m2(f.c(f.s), f.m2(f.c(f.t), f.c(f.s))), f.c(f.t));
    std::vector<RewritingStep> steps = find_redexes(sys, direct);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].pre.empty());
    CHECK(steps[0].post.empty());
    CHECK(steps[0].target == f.m2(f.m2(f.c(f.t), f.m2(f.c(f.s), f.c(f.t))), f.c(f.t)));
}

TEST_CASE("string step discovery covers exactly the word occurrences") {
    StrFix f;
    auto gen = oracle::rng(4031);
    auto rand_word = [&](std::size_t lo, std::size_t hi) {
        Word w;
        std::size_t n = lo + gen() % (hi - lo + 1);
        for (std::size_t k = 0; k < n; ++k) w.push_back(gen() % 2 ? f.s : f.t);
        return w;
    };
    const Signature& sig = *f.P.signature;
    std::optional<SymbolId> unit = sig.find_symbol("e");
    for (int it = 0; it < 30; ++it) {
        std::vector<GroundRule> rules;
        std::vector<std::pair<Word, Word>> wrules;
        std::size_t nr = 1 + gen() % 2;
        for (std::size_t r = 0; r < nr; ++r) {
            Word l = rand_word(1, 3), g = rand_word(0, 3);
            if (l == g) continue;
            rules.push_back({"r" + std::to_string(r), word_to_term(sig, f.mu, unit, l),
                             word_to_term(sig, f.mu, unit, g)});
            wrules.push_back({l, g});
        }
        if (rules.empty()) continue;
        System sys = make_sys(f.P, ParadigmKind::String, {f.s, f.t}, rules);
        Word w = rand_word(0, 8);
        Term t = word_to_term(sig, f.mu, unit, w);

        std::set<std::pair<std::string, std::size_t>> got;
        std::set<Word> targets;
        for (const RewritingStep& st : find_redexes(sys, t)) {
            CHECK(st.source == t);
            CHECK(apply_step(st) == st.target);
            got.emplace(st.rule.name, window_of(f, st));
            targets.insert(f.flat(st.target));
        }

        std::set<std::pair<std::string, std::size_t>> want;
        std::set<Word> want_targets;
        for (std::size_t r = 0; r < wrules.size(); ++r) {
            const auto& [l, g] = wrules[r];
            for (std::size_t i = 0; i + l.size() <= w.size(); ++i) {
                if (!std::equal(l.begin(), l.end(), w.begin() + i)) continue;
                want.emplace(rules[r].name, i);
                Word tgt(w.begin(), w.begin() + i);
                tgt.insert(tgt.end(), g.begin(), g.end());
                tgt.insert(tgt.end(), w.begin() + i + l.size(), w.end());
                want_targets.insert(tgt);
            }
        }
        CHECK(got == want);
        CHECK(targets == want_targets);
    }
}

TEST_CASE("group factorizations produce the flagship steps") {
    GrpFix f;
    System sys = f.braid();

    bool positive_shape = false;
    for (const RewritingStep& st : find_redexes(sys, f.w("s t s t"))) {
        CHECK(st.source == f.w("s t s t"));
        CHECK(apply_step(st) == st.target);
        if (f.red(st.target) == parse_signed_word(*f.P.signature, "t s t t")) positive_shape = true;
    }
    CHECK(positive_shape);

    bool inverse_side = false;
    for (const RewritingStep& st : find_redexes(sys, f.w("t s t s^-")))
        if (f.red(st.target) == parse_signed_word(*f.P.signature, "s t")) inverse_side = true;
    CHECK(inverse_side);
}

TEST_CASE("group insertions reach conjugated factorizations") {
    GrpFix f;
    System sys = f.braid();
    // from ts, wrap the rule between ts and (ts·s)⁻-style tails via one
    // inserted cancelling pair
    SignedWord want = parse_signed_word(*f.P.signature, "t s t s t s^- t^- s^-");
    bool found = false;
    for (const RewritingStep& st : find_redexes(sys, f.w("t s"))) {
        CHECK(apply_step(st) == st.target);
        if (f.red(st.target) == want) found = true;
    }
    CHECK(found);
}

TEST_CASE("reachability explores the braid word graph completely") {
    StrFix f;
    System sys = f.braid();
    ReachabilityGraph g = reachability(sys, {f.w("ststs")});
    CHECK(g.complete);
    REQUIRE(g.keys.size() == 3);
    CHECK(g.keys[0] == f.w("ststs"));
    std::set<Term> rest{g.keys[1], g.keys[2]};
    CHECK(rest == std::set<Term>{f.w("tstts"), f.w("sttst")});
    CHECK(g.out[0].size() == 2);
    CHECK(g.out[1].empty());
    CHECK(g.out[2].empty());
    CHECK(g.depth == std::vector<std::size_t>{0, 1, 1});
}

TEST_CASE("termination: braid word system terminates") {
    StrFix f;
    System sys = f.braid();
    TerminationVerdict v = termination_check(sys, default_seeds(sys));
    CHECK(v.kind == TerminationKind::Terminating);
    CHECK(v.complete);
    CHECK(v.witness.empty());
}

TEST_CASE("termination: a two-letter swap system quasi-terminates with a replayable cycle") {
    StrFix f;
    std::vector<GroundRule> rules = {parse_native_rule(f.spec, f.P, "ab", "s => t"),
                                     parse_native_rule(f.spec, f.P, "ba", "t => s")};
    System sys = make_sys(f.P, ParadigmKind::String, {f.s, f.t}, rules);
    TerminationVerdict v = termination_check(sys, {f.w("s")});
    CHECK(v.kind == TerminationKind::QuasiTerminating);
    CHECK(v.complete);
    REQUIRE(!v.witness.empty());
    for (std::size_t i = 0; i < v.witness.steps.size(); ++i) {
        CHECK(apply_step(v.witness.steps[i]) == v.witness.steps[i].target);
        if (i + 1 < v.witness.steps.size())
            CHECK(v.witness.steps[i].target == v.witness.steps[i + 1].source);
    }
    CHECK(v.witness.steps.back().target == v.witness.steps.front().source);
}

TEST_CASE("termination: duplication is reported as exponentiation") {
    std::vector<SymbolId> ids;
    CartesianPolygraph P = extend_with_constants(builtin_theory("Mag"), {{"a", "m"}}, &ids);
    SymbolId a = ids[0];
    SymbolId mu = P.signature->symbol("mu");
    GroundRule dup{"dup", Term::app(a), Term::app(mu, {Term::app(a), Term::app(a)})};
    Bounds b;
    b.max_terms = 60;
    System sys = make_sys(P, ParadigmKind::Generic, {a}, {dup}, StepPolicy::EPRE, b);
    TerminationVerdict v = termination_check(sys, default_seeds(sys));
    CHECK(v.kind == TerminationKind::ExponentiationDetected);
    CHECK(!v.complete);
    REQUIRE(!v.witness.empty());
    Term first = v.witness.steps.front().source;
    Term last = v.witness.steps.back().target;
    bool recurs = false;
    for (const auto& [pos, sub] : enumerate_positions(last))
        if (!pos.is_root() && sub == first) recurs = true;
    CHECK(recurs);
}

TEST_CASE("linear cycle steps undo every rule") {
    LinFix f;
    System sys = f.intro();
    const Signature& sig = *f.P.signature;

    bool back = false;
    for (const RewritingStep& st : find_redexes(sys, f.w("xz"))) {
        CHECK(apply_step(st) == st.target);
        if (f.poly(st.target) == f.poly(f.w("xy"))) {
            back = true;
            // the display is the -f ⊕ (g ⊕ f) instance
            Term display = apply_trace(st.source, st.pre);
            SymbolId oplus = sig.symbol("oplus"), oneg = sig.symbol("oneg");
            Term fterm = st.rule.lhs, gterm = st.rule.rhs;
            CHECK(display == Term::app(oplus, {Term::app(oneg, {fterm}),
                                               Term::app(oplus, {gterm, fterm})}));
        }
    }
    CHECK(back);
}

TEST_CASE("termination: the linear rule graph quasi-terminates on rule sides") {
    LinFix f;
    System sys = f.intro();
    TerminationVerdict v = termination_check(sys, default_seeds(sys));
    CHECK(v.kind == TerminationKind::QuasiTerminating);
    CHECK(v.complete);
    REQUIRE(!v.witness.empty());
    CHECK(v.witness.steps.back().target == v.witness.steps.front().source);
}

TEST_CASE("termination: the linear seed term diverges with growth evidence") {
    LinFix f;
    System sys = f.intro();
    TerminationVerdict v = termination_check(sys, {f.w("xyt + xzt")});
    CHECK(v.kind == TerminationKind::NonTerminatingEvidence);
    CHECK(!v.complete);
    REQUIRE(!v.witness.empty());
    for (const RewritingStep& st : v.witness.steps) CHECK(apply_step(st) == st.target);
}

TEST_CASE("linear step discovery produces the additive branching") {
    LinFix f;
    System sys = f.intro();
    Term seed = f.w("xyt + xzt");
    std::set<std::string> targets;
    for (const RewritingStep& st : find_redexes(sys, seed)) {
        CHECK(st.source == seed);
        CHECK(apply_step(st) == st.target);
        targets.insert(f.poly(st.target).to_string(*f.P.signature));
    }
    CHECK(targets.count("2*xzt"));
    CHECK(targets.count("3*xyt"));
}

TEST_CASE("every left-monomial rule is reversible through a cycle step") {
    LinFix f;
    auto gen = oracle::rng(2718);
    std::vector<SymbolId> alpha{f.x, f.y, f.z, f.t};
    const Signature& sig = *f.P.signature;
    auto rand_word = [&](std::size_t lo, std::size_t hi) {
        Word w;
        std::size_t n = lo + gen() % (hi - lo + 1);
        for (std::size_t k = 0; k < n; ++k) w.push_back(alpha[gen() % alpha.size()]);
        return w;
    };
    int done = 0;
    while (done < 20) {
        Polynomial fp = Polynomial::monomial(rand_word(1, 3));
        Polynomial gp;
        std::size_t monos = gen() % 3;
        for (std::size_t k = 0; k < monos; ++k)
            gp.add(rand_word(1, 3), static_cast<int>(gen() % 5) - 2);
        if (fp == gp) continue;
        GroundRule r{"r", polynomial_to_term(sig, fp), polynomial_to_term(sig, gp)};
        System sys = make_sys(f.P, ParadigmKind::Linear, {f.x, f.y, f.z, f.t}, {r});
        bool reversed = false;
        for (const RewritingStep& st : find_redexes(sys, r.rhs))
            if (linear_canonical(sig, st.target) == fp) reversed = true;
        CHECK(reversed);
        ++done;
    }
}

TEST_CASE("quasi-normal forms: braid words and fixed points") {
    StrFix f;
    System sys = f.braid();
    QuasiNormalForm q = quasi_normal_form(sys, f.w("ststs"));
    CHECK(q.term == std::min(f.w("tstts"), f.w("sttst")));
    CHECK(q.distance == 1);
    QuasiNormalForm fixed = quasi_normal_form(sys, f.w("tstts"));
    CHECK(fixed.term == f.w("tstts"));
    CHECK(fixed.distance == 0);
}

TEST_CASE("quasi-normal forms: a two-cycle picks the least key") {
    StrFix f;
    std::vector<GroundRule> rules = {parse_native_rule(f.spec, f.P, "ab", "s => t"),
                                     parse_native_rule(f.spec, f.P, "ba", "t => s")};
    System sys = make_sys(f.P, ParadigmKind::String, {f.s, f.t}, rules);
    Term a = f.w("s"), b = f.w("t");
    Term least = std::min(a, b);
    QuasiNormalForm q = quasi_normal_form(sys, a);
    CHECK(q.term == least);
    CHECK(q.distance == (least == a ? 0u : 1u));
}

TEST_CASE("quasi-normal form distance agrees with a word-level oracle") {
    StrFix f;
    auto gen = oracle::rng(909);
    const Signature& sig = *f.P.signature;
    std::optional<SymbolId> unit = sig.find_symbol("e");
    auto rand_word = [&](std::size_t lo, std::size_t hi) {
        Word w;
        std::size_t n = lo + gen() % (hi - lo + 1);
        for (std::size_t k = 0; k < n; ++k) w.push_back(gen() % 2 ? f.s : f.t);
        return w;
    };
    int done = 0, attempts = 0;
    while (done < 15 && attempts < 200) {
        ++attempts;
        std::vector<std::pair<Word, Word>> wrules;
        std::vector<GroundRule> rules;
        std::size_t nr = 1 + gen() % 2;
        for (std::size_t r = 0; r < nr; ++r) {
            Word l = rand_word(1, 3), g = rand_word(1, 3);
            if (l == g) continue;
            wrules.push_back({l, g});
            rules.push_back({"r" + std::to_string(r), word_to_term(sig, f.mu, unit, l),
                             word_to_term(sig, f.mu, unit, g)});
        }
        if (rules.empty()) continue;
        Bounds b;
        b.max_terms = 300;
        System sys = make_sys(f.P, ParadigmKind::String, {f.s, f.t}, rules, StepPolicy::EPRE, b);
        Word seed = rand_word(1, 5);
        QuasiNormalForm q;
        try {
            q = quasi_normal_form(sys, word_to_term(sig, f.mu, unit, seed));
        } catch (const Error& e) {
            CHECK(e.code == ErrorCode::BoundExhausted);
            continue;
        }
        // word-level oracle: reachable set, per-word return check, least comb
        std::set<Word> reach = oracle::o_word_reachable(wrules, seed, 400);
        std::optional<Term> best;
        std::map<Word, std::size_t> dist;
        // BFS distances
        std::deque<Word> queue{seed};
        dist[seed] = 0;
        while (!queue.empty()) {
            Word u = queue.front();
            queue.pop_front();
            for (const Word& v : oracle::o_word_steps(wrules, u))
                if (!dist.count(v)) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
        }
        for (const Word& u : reach) {
            bool quasi_irreducible = true;
            for (const Word& v : oracle::o_word_steps(wrules, u))
                if (!oracle::o_word_reachable(wrules, v, 400).count(u)) {
                    quasi_irreducible = false;
                    break;
                }
            if (!quasi_irreducible) continue;
            Term cand = word_to_term(sig, f.mu, unit, u);
            if (!best || cand < *best) best = cand;
        }
        REQUIRE(best.has_value());
        CHECK(q.term == *best);
        CHECK(q.distance == dist.at(f.flat(*best)));
        ++done;
    }
    CHECK(done == 15);
}

TEST_CASE("key bridges replay onto canonical keys") {
    GrpFix f;
    System sys = f.braid();
    auto gen = oracle::rng(515);
    const Signature& sig = *f.P.signature;
    GroupView gv = group_view(sig);
    // random group terms with nested inversions
    std::function<Term(int)> rand_term = [&](int depth) -> Term {
        if (depth == 0 || gen() % 3 == 0) return Term::app(gen() % 2 ? f.s : f.t);
        if (gen() % 4 == 0) return Term::app(gv.e);
        if (gen() % 3 == 0) return Term::app(gv.inv, {rand_term(depth - 1)});
        return Term::app(gv.mu, {rand_term(depth - 1), rand_term(depth - 1)});
    };
    for (int it = 0; it < 100; ++it) {
        Term t = rand_term(3);
        Term key = canonical_key(f.P, sys.apm.split, ParadigmKind::Group, t, sys.bounds);
        EquivTrace br = key_bridge(sys, t, key);
        CHECK(apply_trace(t, br) == key);
    }
}
