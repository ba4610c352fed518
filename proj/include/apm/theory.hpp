#pragma once

#include <string>
#include <vector>

#include "apm/term.hpp"

namespace apm {

/// An equational axiom lhs = rhs over variables, oriented left-to-right when
/// used as a rewrite rule.  `modulo` marks axioms that stay unoriented in the
/// split (the equations rewriting happens modulo).
struct TheoryRule {
    std::string name;
    Term lhs;
    Term rhs;
    bool modulo = false;
};

/// A presentation of an algebraic theory: sorts and operations (the
/// signature) plus equational axioms.
struct CartesianPolygraph {
    std::string name;
    SignaturePtr signature;
    std::vector<TheoryRule> axioms;
};

/// Partition of a theory's axioms into an oriented rewrite part and the
/// unoriented modulo part.  The unoriented part is only ever allowed to hold
/// associativity/commutativity axioms.
struct ModuloSplit {
    std::vector<TheoryRule> oriented;
    std::vector<TheoryRule> unoriented;
};

/// Structural recognizers for the two admissible unoriented axiom shapes.
bool is_assoc_axiom(const TheoryRule& r);
bool is_comm_axiom(const TheoryRule& r);
/// The binary symbol an A/C axiom is about (lhs root).
SymbolId ac_axiom_symbol(const TheoryRule& r);

/// Built-in presentations: Mag, Ass, AC, Mon, CMon, Grp, GrpTilde, Ab, Ring,
/// CRing, Mod, ModC.  Throws UnknownTheory otherwise.
CartesianPolygraph builtin_theory(const std::string& name);
std::vector<std::string> builtin_theory_names();

/// Same theory over a signature extended with fresh constants (name, sort
/// name).  Existing symbol ids are preserved; the new constant ids are
/// returned in declaration order.
CartesianPolygraph extend_with_constants(const CartesianPolygraph& P,
                                         const std::vector<std::pair<std::string, std::string>>& constants,
                                         std::vector<SymbolId>* new_ids = nullptr);

/// Validated split of the theory's axioms by their `modulo` flag.  Throws
/// UnsupportedModuloTheory if any unoriented axiom is not an A/C shape.
ModuloSplit modulo_split(const CartesianPolygraph& P);

/// One way an axiom of P applies somewhere inside the ground term t.
struct GroundAxiomInstance {
    Context ctx;        // surrounding context in t
    std::string axiom;  // axiom name
    bool forward;       // lhs->rhs if true, rhs->lhs otherwise
    Term from;          // ground instance of the matched side (== subterm of t)
    Term to;            // ground instance of the opposite side
};

/// All single-axiom applications available in t, both directions, at every
/// position.  Variables unbound by the matched side are instantiated from
/// `pool` (defaults to the signature's constants of the right sort).
std::vector<GroundAxiomInstance> groundify_matches(const CartesianPolygraph& P, const Term& t,
                                                   const std::vector<Term>& pool = {});

/// Restriction of groundify_matches to the given axiom subset.
std::vector<GroundAxiomInstance> groundify_matches(const CartesianPolygraph& P,
                                                   const std::vector<TheoryRule>& axioms, const Term& t,
                                                   const std::vector<Term>& pool = {});

} // namespace apm
