#pragma once

#include <optional>
#include <set>

#include "apm/polynomial.hpp"
#include "apm/step.hpp"
#include "apm/system.hpp"

namespace apm {

// ---------------------------------------------------------------------------
// Plain (untraced) canonical forms
// ---------------------------------------------------------------------------

/// Binary symbols whose associativity (resp. commutativity) axiom sits in the
/// unoriented part of the split.
std::set<SymbolId> assoc_symbols(const ModuloSplit& split);
std::set<SymbolId> comm_symbols(const ModuloSplit& split);

/// Flatten nested applications of `mu` into the word of its leaves, erasing
/// the unit if given.  NonFlattenableSymbol on anything else.
Word assoc_flatten(const Signature& sig, SymbolId mu, std::optional<SymbolId> unit, const Term& t);

/// Right comb over the word; the empty word becomes the unit (required then).
Term word_to_term(const Signature& sig, SymbolId mu, std::optional<SymbolId> unit, const Word& w);

/// Canonical representative of the A/C-class: maximal chains of associative
/// symbols become right combs, commutative chains additionally sorted by the
/// fixed term order.
Term ac_canonical(const Term& t, const std::set<SymbolId>& assoc, const std::set<SymbolId>& comm);

// ---------------------------------------------------------------------------
// Group words (GrpTilde)
// ---------------------------------------------------------------------------

/// Ops of a GrpTilde-shaped signature, looked up by name.
struct GroupView {
    SymbolId mu, e, inv;
};
GroupView group_view(const Signature& sig);

/// Leaf word of t after pushing inversions to the leaves and performing the
/// mid-word cancellations G4/G5 afford directly.  A cancelling pair in final
/// position is NOT removed here (reaching it takes a backwards unit step);
/// use group_reduce for the free reduction.
SignedWord leaf_signature(const Signature& sig, const Term& t);

/// Right-comb term over a signed word (letters q or inv(q)); empty word -> e.
Term signed_word_to_term(const Signature& sig, const SignedWord& w);

/// Canonical term of the group class: rebuilt from the freely reduced word.
Term group_canonical(const Signature& sig, const Term& t);

// ---------------------------------------------------------------------------
// Linear / module canonical forms (ModC, optionally with a product)
// ---------------------------------------------------------------------------

/// Ops of a ModC-shaped signature; `dot` present only in linear systems with
/// a monomial product.
struct LinearView {
    SymbolId add, zero, neg, mul, one;
    SymbolId oplus, ozero, oneg, act;
    std::optional<SymbolId> dot;
};
LinearView linear_view(const Signature& sig);

Coeff eval_scalar(const Signature& sig, const Term& t);
Term coeff_to_term(const Signature& sig, const Coeff& c); // ±1-sum encoding; NotRepresentable on non-integers

/// Evaluate a module-sort term into its canonical polynomial.
Polynomial linear_canonical(const Signature& sig, const Term& t);
/// Canonical term rebuild; linear_canonical(polynomial_to_term(p)) == p.
Term polynomial_to_term(const Signature& sig, const Polynomial& p);

/// One applicable oriented ModC (or product) rule occurrence, modulo the AC
/// arrangement of the chains involved.
struct ModcCandidate {
    std::string rule;
    Term arranged; // ≡AC the input, with the redex syntactic at `pos`
    Position pos;
    Term from;     // redex instance
    Term to;       // contractum instance
    Term result;   // arranged with the redex replaced
};
/// Complete-for-progress candidate enumeration: a term with no candidate is
/// in canonical (polynomial) form.  Deterministic order.
std::vector<ModcCandidate> modc_candidates(const Signature& sig, const Term& t);

/// Strict-decrease certificates used by the termination property tests.
struct ModcMeasure {
    Integer additive;   // ⊕/module-inverse count
    Integer interp;     // polynomial interpretation over ℕ≥2
    bool operator<(const ModcMeasure& o) const {
        return additive != o.additive ? additive < o.additive : interp < o.interp;
    }
};
ModcMeasure modc_measure(const Signature& sig, const Term& t);

/// Inversion weight w: leaves weigh 1, w(mu(a,b)) = w(a)+w(b)+1,
/// w(inv(a)) = 3·w(a).  Strictly monotone in every argument and invariant
/// under associativity, so a decrease at a redex is a decrease everywhere.
/// Second component: term size (informational tie-break).
std::pair<Integer, std::size_t> group_measure(const Signature& sig, const Term& t);

// ---------------------------------------------------------------------------
// Traced normalization
// ---------------------------------------------------------------------------

struct TracedTerm {
    Term result;
    EquivTrace trace; // from the input to `result`
};

/// Rewrite t to its paradigm canonical form recording every axiom
/// application.  String: unit erasure + right-comb; Group: full GrpTilde
/// normalization down to group_canonical (trailing cancelling pairs removed
/// via a backwards unit step feeding G4/G5); Linear: oriented ModC/product
/// normalization then AC sorting; Generic: identity.
TracedTerm canonical_trace(const CartesianPolygraph& P, const ModuloSplit& split, ParadigmKind par,
                           const Term& t);

/// Explicit A/C axiom trace between two AC-equivalent terms (via the shared
/// canonical form).  MalformedStep if they are not AC-equal.
EquivTrace ac_bridge(const CartesianPolygraph& P, const ModuloSplit& split, const Term& a, const Term& b);

// ---------------------------------------------------------------------------
// Class enumeration and equivalence
// ---------------------------------------------------------------------------

struct ClassEnumeration {
    std::vector<Term> members;        // BFS order, members[0] == start
    std::vector<EquivTrace> traces;   // trace from start to members[i]
    bool complete = true;             // false if the bound cut enumeration short
};

/// Closure of t under the given unoriented axioms, both directions, up to
/// `bound` members.
ClassEnumeration enumerate_class(const CartesianPolygraph& P, const std::vector<TheoryRule>& unoriented,
                                 const Term& t, std::size_t bound);

/// Signed words within `insertions` inverse-pair insertions of w (any letter
/// of the alphabet, any position).  Always an under-approximation of the full
/// class, so the flag is only true for insertions == 0.
struct WordExpansion {
    std::vector<SignedWord> words;
    bool complete = false;
};
WordExpansion insertion_expansions(const SignedWord& w, const std::vector<SymbolId>& alphabet,
                                   std::size_t insertions);

/// Decide s ≡_P t.  Exact for the word/polynomial paradigms and for theories
/// whose axioms are all unoriented A/C; otherwise a bounded bidirectional
/// search that may return Unknown.
Tri equiv_modulo(const CartesianPolygraph& P, ParadigmKind par, const Term& a, const Term& b,
                 const Bounds& bounds = {});

/// Paradigm canonical representative used for node keys; for Generic this is
/// the least member of the bounded class (sound: never merges inequivalent
/// terms, may fail to merge equivalent ones).
Term canonical_key(const CartesianPolygraph& P, const ModuloSplit& split, ParadigmKind par, const Term& t,
                   const Bounds& bounds);

} // namespace apm
