#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apm/strategy.hpp"

namespace apm {

/// σ-branching modulo (a, e, b): two σ-positive reduction paths whose sources
/// are linked by the equivalence trace e (from left source to right source).
/// Either side may be empty.  Local means left is one step and
/// ℓ(e) + ℓ(right) = 1.
struct Branching {
    RewritingPath left;
    EquivTrace equiv;
    RewritingPath right;
};

enum class BranchingClass { Trivial, InclusionIndependent, Orthogonal, NonOrthogonal };
const char* branching_class_name(BranchingClass k);

/// Classification of a local branching by redex footprints.
///   TRIVIAL                the same application twice;
///   ORTHOGONAL             disjoint redexes of one shared display
///                          (a two-hole context realizes both);
///   INCLUSION_INDEPENDENT  footprints disjoint but the applications live in
///                          different arrangements, so one context only
///                          factors through the other's subterm;
///   NON_ORTHOGONAL         everything else — overlapping footprints and
///                          pairs whose footprints cannot be compared.
/// Overlapping redexes are never labelled ORTHOGONAL.  NotLocal if b is not
/// local or the sides are not coinitial along e.
BranchingClass classify_local_branching(const System& sys, const Branching& b);

enum class Completeness { Exact, UnderApproximate };
const char* completeness_name(Completeness c);

struct CriticalBranching {
    Branching branching;
    Term source; // canonical key of the shared source class
};

struct CriticalSet {
    std::vector<CriticalBranching> items;
    Completeness completeness = Completeness::Exact;
};

/// Non-trivial, non-orthogonal, ⊑-minimal local σ-branchings.
///   string   word overlaps (proper suffix against prefix) and proper factor
///            inclusions of the flattened rule sources — exact;
///   linear   the same scan on monomial rule sources (NotLeftMonomial when a
///            left side is not a plain monomial) — exact;
///   group    overlaps and inclusions among {r^ε}, plus seam-cancellation
///            products red(r₁^ε·r₂^δ), realized through the engine's
///            insertion-bounded step search — under-approximate;
///   generic  syntactic subterm overlaps across bounded class members —
///            under-approximate.
/// Only pairs whose both steps are σ-positive are kept.  Deterministic order
/// by canonical source.
CriticalSet critical_branchings(const System& sys, const PositiveStrategy& sigma);

enum class ConfluenceStatus { Confluent, NonConfluent, Unknown };
const char* confluence_status_name(ConfluenceStatus s);

/// σ-confluence modulo closing (a′, e′, b′) of a branching.  Paths are
/// key-linked like reachability edges: each step starts at the canonical key
/// of its predecessor's target (replay with key_bridge between steps).
struct ClosingDiagram {
    RewritingPath a2;
    EquivTrace e2;
    RewritingPath b2;
};

struct JoinVerdict {
    ConfluenceStatus status = ConfluenceStatus::Unknown;
    std::optional<ClosingDiagram> diagram; // present on Confluent
    std::vector<Term> witnesses;          // divergent irreducible keys on NonConfluent
    std::string detail;
};

/// Breadth-first σ-positive joinability modulo of the branching's targets, to
/// the given depth.  NON_CONFLUENT only with a certificate: both positive
/// closures complete, no cross-equivalent pair, and the reported witnesses
/// σ-positively irreducible.  Bound exhaustion yields UNKNOWN.
JoinVerdict joinable_modulo(const System& sys, const PositiveStrategy& sigma, const Branching& b,
                            std::size_t depth);

struct BranchingReportEntry {
    CriticalBranching critical;
    BranchingClass cls = BranchingClass::NonOrthogonal;
    JoinVerdict verdict;
};

struct ConfluenceReport {
    ConfluenceStatus status = ConfluenceStatus::Unknown;
    Completeness enumeration = Completeness::Exact; // of the critical set
    std::vector<BranchingReportEntry> branchings;   // criticals, then axiom pairs
    TerminationVerdict quasi_termination;           // precondition record
    PositiveConfluenceReport positive_confluence;   // precondition record
    std::string detail;
};

/// Critical-branching criterion for local confluence.  Joins every critical
/// branching, plus — for policies without the leading equivalence (R, RPE) —
/// the (a, e) branchings over single axiom applications on rule sources.
/// CONFLUENT needs every join closed, an exact enumeration, and (except under
/// the full strategy, which needs neither) the quasi-termination and
/// positive-confluence preconditions; any certified non-joinable critical
/// branching gives NON_CONFLUENT outright.  Linear systems demand the strict
/// TERMINATING precondition.
ConfluenceReport local_confluence_report(const System& sys, const PositiveStrategy& sigma);

/// Newman lemma modulo: quasi-termination on the seeds plus local confluence
/// gives confluence.  On success the conclusion is validated empirically:
/// non-local branchings sampled from the reachability graph must also close.
ConfluenceReport newman_confluence_report(const System& sys, const PositiveStrategy& sigma,
                                          const std::vector<Term>& seeds);

/// Quotient rewriting system S̄ (policy-independent) with the σ-positivity of
/// each rule's root application recorded (the S̄^σ annotation).
struct QuotientPresentation {
    std::vector<std::string> generators;
    struct Rule {
        std::string name, lhs, rhs;
        bool positive = false;
    };
    std::vector<Rule> rules;
    std::string render() const; // "<s,t | sts => tst>"
};

QuotientPresentation quotient_system(const System& sys, const PositiveStrategy& sigma);

} // namespace apm
