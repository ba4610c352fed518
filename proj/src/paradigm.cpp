#include "apm/paradigm.hpp"

#include <algorithm>

#include "apm/errors.hpp"
#include "apm/normalizer.hpp"
#include "apm/polynomial.hpp"
#include "apm/term_parser.hpp"

namespace apm {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

Term bin(SymbolId f, Term a, Term b) { return Term::app(f, {std::move(a), std::move(b)}); }

} // namespace

CartesianPolygraph linear_host_theory() {
    CartesianPolygraph base = builtin_theory("ModC");
    Signature sig = *base.signature;
    SortId m = sig.sort("m");
    SortId r = sig.sort("r");
    SymbolId dot = sig.add_symbol("dot", {m, m}, m);
    sig.set_infix(dot);
    SymbolId oplus = sig.symbol("oplus");
    SymbolId ozero = sig.symbol("ozero");
    SymbolId act = sig.symbol("act");

    Term x = Term::var(1, m), y = Term::var(2, m), z = Term::var(3, m);
    Term s = Term::var(4, r);
    Term zm = Term::app(ozero);
    CartesianPolygraph P;
    P.name = "ModCW";
    P.axioms = base.axioms;
    P.axioms.push_back({"alg1", bin(dot, bin(oplus, y, z), x), bin(oplus, bin(dot, y, x), bin(dot, z, x)), false});
    P.axioms.push_back({"alg2", bin(dot, x, bin(oplus, y, z)), bin(oplus, bin(dot, x, y), bin(dot, x, z)), false});
    P.axioms.push_back({"alg3", bin(dot, bin(act, s, y), x), bin(act, s, bin(dot, y, x)), false});
    P.axioms.push_back({"alg4", bin(dot, x, bin(act, s, y)), bin(act, s, bin(dot, x, y)), false});
    P.axioms.push_back({"alg5", bin(dot, zm, x), zm, false});
    P.axioms.push_back({"alg6", bin(dot, x, zm), zm, false});
    P.axioms.push_back({"A_dot", bin(dot, bin(dot, x, y), z), bin(dot, x, bin(dot, y, z)), true});
    P.signature = std::make_shared<Signature>(std::move(sig));
    return P;
}

Term parse_native(const ParadigmSpec& p, const CartesianPolygraph& P, const std::string& text) {
    const Signature& sig = *P.signature;
    switch (p.kind) {
    case ParadigmKind::String: {
        SymbolId mu = sig.symbol("mu");
        std::optional<SymbolId> unit = sig.find_symbol("e");
        return word_to_term(sig, mu, unit, parse_word(sig, trim(text)));
    }
    case ParadigmKind::Linear:
        return polynomial_to_term(sig, parse_polynomial(sig, text, p.field));
    case ParadigmKind::Group: {
        GroupView gv = group_view(sig);
        SignedWord w = parse_signed_word(sig, text);
        if (w.empty()) return Term::app(gv.e);
        auto atom = [&](const Letter& l) {
            Term c = Term::app(l.sym);
            return l.inverted ? Term::app(gv.inv, {std::move(c)}) : c;
        };
        Term acc = atom(w[0]);
        for (std::size_t i = 1; i < w.size(); ++i) acc = bin(gv.mu, std::move(acc), atom(w[i]));
        return acc;
    }
    case ParadigmKind::Generic: return parse_term(sig, text);
    }
    fail(ErrorCode::ParseError, "unhandled paradigm");
}

GroundRule parse_native_rule(const ParadigmSpec& p, const CartesianPolygraph& P,
                             const std::string& name, const std::string& text) {
    std::size_t arrow = text.find("=>");
    if (arrow == std::string::npos)
        fail(ErrorCode::ParseError, "rule '" + name + "' lacks the => separator");
    std::string lhs = trim(text.substr(0, arrow));
    std::string rhs = trim(text.substr(arrow + 2));
    if (lhs.empty() || rhs.empty())
        fail(ErrorCode::ParseError, "rule '" + name + "' has an empty side");
    return {name, parse_native(p, P, lhs), parse_native(p, P, rhs)};
}

std::string render_native(const ParadigmSpec& p, const CartesianPolygraph& P, const Term& t) {
    const Signature& sig = *P.signature;
    switch (p.kind) {
    case ParadigmKind::String: {
        SymbolId mu = sig.symbol("mu");
        std::optional<SymbolId> unit = sig.find_symbol("e");
        return word_to_string(sig, assoc_flatten(sig, mu, unit, t));
    }
    case ParadigmKind::Linear: {
        if (typecheck_term(sig, t) == sig.sort("r"))
            fail(ErrorCode::NotRepresentable, "scalar-sort term has no native polynomial notation");
        return linear_canonical(sig, t).to_string(sig);
    }
    case ParadigmKind::Group:
        return word_to_string(sig, group_reduce(leaf_signature(sig, t)));
    case ParadigmKind::Generic: return term_to_string(sig, t);
    }
    fail(ErrorCode::NotRepresentable, "unhandled paradigm");
}

ValidatedRules validate_rules(const ParadigmSpec& p, const CartesianPolygraph& P,
                              const std::vector<GroundRule>& rules) {
    const Signature& sig = *P.signature;
    ValidatedRules out;
    for (const GroundRule& r : rules) {
        GroundRule kept = r;
        switch (p.kind) {
        case ParadigmKind::String: {
            SymbolId mu = sig.symbol("mu");
            std::optional<SymbolId> unit = sig.find_symbol("e");
            Word l = assoc_flatten(sig, mu, unit, r.lhs);
            Word g = assoc_flatten(sig, mu, unit, r.rhs);
            if (l.empty()) {
                out.diagnostics.push_back("rule '" + r.name + "': empty left word, dropped");
                continue;
            }
            if (l == g) {
                out.diagnostics.push_back("rule '" + r.name + "': degenerate, dropped");
                continue;
            }
            kept.lhs = word_to_term(sig, mu, unit, l);
            kept.rhs = word_to_term(sig, mu, unit, g);
            break;
        }
        case ParadigmKind::Linear: {
            Polynomial l = linear_canonical(sig, r.lhs);
            Polynomial g = linear_canonical(sig, r.rhs);
            if (l.monomial_count() != 1 || l.terms().begin()->second != 1)
                fail(ErrorCode::NotLeftMonomial,
                     "rule '" + r.name + "' left side is not a plain monomial");
            if (l == g) {
                out.diagnostics.push_back("rule '" + r.name + "': degenerate, dropped");
                continue;
            }
            kept.lhs = polynomial_to_term(sig, l);
            kept.rhs = polynomial_to_term(sig, g);
            break;
        }
        case ParadigmKind::Group: {
            Term l = signed_word_to_term(sig, group_reduce(leaf_signature(sig, r.lhs)));
            Term g = signed_word_to_term(sig, group_reduce(leaf_signature(sig, r.rhs)));
            if (l != r.lhs || g != r.rhs)
                out.diagnostics.push_back("rule '" + r.name + "': sides reduced");
            if (l == g) {
                out.diagnostics.push_back("rule '" + r.name + "': degenerate, dropped");
                continue;
            }
            kept.lhs = std::move(l);
            kept.rhs = std::move(g);
            break;
        }
        case ParadigmKind::Generic:
            if (r.lhs == r.rhs) {
                out.diagnostics.push_back("rule '" + r.name + "': degenerate, dropped");
                continue;
            }
            break;
        }
        out.rules.push_back(std::move(kept));
    }
    return out;
}

} // namespace apm
