#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apm/normalizer.hpp"
#include "apm/step.hpp"
#include "apm/system.hpp"

namespace apm {

/// Rule sides of the system, first occurrence order, deduplicated.
std::vector<Term> default_seeds(const System& sys);

/// Every step out of t the engine materializes under the system's policy.
///
/// R / RPE: syntactic rule occurrences in t itself, both traces empty.
/// EPR / EPRE: the source class is searched through the paradigm machinery:
///   - Generic: syntactic occurrences in each member of the bounded
///     unoriented-axiom class of the canonical form, with the class trace as
///     the pre part;
///   - String: the class scan above, plus one canonically arranged step for
///     every word-level rule occurrence the truncated class missed;
///   - Group: factorizations red(u·m·v) = red(t) of the reduced word, for m
///     the rule side or its formal inverse and u, v reduced, augmented by
///     inverse-pair insertions up to the insertion bound.  Displays are the
///     strategy shapes u·m·v with the rule under an inversion when m is the
///     inverse side;
///   - Linear: the class scan on the polynomial canonical form, plus the
///     cycle step g ❀ -f ⊕ (g ⊕ f) ⇒ -g ⊕ (g ⊕ f) ❀ f for every rule
///     f ⇒ g whose right side is equivalent to t.
/// The post trace is always left empty at discovery.  Deterministic order.
std::vector<RewritingStep> find_redexes(const System& sys, const Term& t);

/// Equivalence trace from t to its node key (the paradigm canonical
/// representative).  MalformedStep if key is not t's key.
EquivTrace key_bridge(const System& sys, const Term& t, const Term& key);

struct ReachEdge {
    std::size_t to;     // target node
    RewritingStep step; // replayable witness; source == keys[from]
};

/// Rewriting graph explored breadth-first from the seeds.  Nodes are keyed
/// by paradigm canonical form and expanded from the key term, so every edge
/// step starts at keys[i] exactly.  Edges to the same target are collapsed
/// to the first step found.
struct ReachabilityGraph {
    std::vector<Term> keys;              // discovery order
    std::vector<std::size_t> depth;      // BFS distance from the seed layer
    std::vector<int> seed_origin;        // seed index that first reached the node
    std::vector<int> parent;             // BFS tree parent, -1 on seeds
    std::vector<std::vector<ReachEdge>> out;
    bool complete = true;                // false when a bound cut exploration short

    std::optional<std::size_t> index_of(const Term& key) const;
};

ReachabilityGraph reachability(const System& sys, const std::vector<Term>& seeds);

enum class TerminationKind {
    Terminating,
    QuasiTerminating,
    AlgebraicallyTerminating, // never produced by the bounded check; see below
    ExponentiationDetected,
    NonTerminatingEvidence,
    Unknown,
};
const char* termination_kind_name(TerminationKind k);

/// Everything the bounded exploration can say about termination:
///  - complete acyclic graph        -> Terminating
///  - complete cyclic graph         -> QuasiTerminating, witness = a cycle
///  - node whose key recurs inside a strictly larger descendant (or word
///    factor for the word paradigms)  -> ExponentiationDetected, witness =
///    the connecting path
///  - incomplete + strictly growing key sizes along a BFS chain
///                                  -> NonTerminatingEvidence (heuristic)
///  - otherwise                     -> Unknown
/// AlgebraicallyTerminating needs a context-recursion proof the bounded
/// search cannot deliver, so the enum value exists for reports only.
struct TerminationVerdict {
    TerminationKind kind = TerminationKind::Unknown;
    bool complete = false;  // the underlying reachability completed
    RewritingPath witness;  // replayable; empty for Terminating/Unknown
    std::string detail;
};

TerminationVerdict termination_check(const System& sys, const std::vector<Term>& seeds);

/// Least-key quasi-irreducible node reachable from t, with its BFS distance.
/// A node is quasi-irreducible when every outgoing step can come back.
/// BoundExhausted when the reachable graph is truncated.
struct QuasiNormalForm {
    Term term;
    std::size_t distance = 0;
};
QuasiNormalForm quasi_normal_form(const System& sys, const Term& t);

} // namespace apm
