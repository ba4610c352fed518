#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "apm/step.hpp"
#include "apm/theory.hpp"
#include "apm/word.hpp"

namespace apm {

/// Which ingredients of a ₚRₚ step the engine materializes around the R part.
enum class StepPolicy { R, EPR, RPE, EPRE };

/// The rewriting dialect a system lives in.  It fixes native syntax, the
/// canonical form used for node keys and the specialized searches.
enum class ParadigmKind { String, Linear, Group, Generic };

enum class Tri { False = 0, True = 1, Unknown = 2 };

/// Search limits; every verdict produced under them says so.
struct Bounds {
    std::size_t max_class = 256;      // members per equivalence class enumeration
    std::size_t max_terms = 10000;    // nodes per reachability exploration
    std::size_t max_depth = 64;       // path length cap in reachability
    std::size_t join_depth = 8;       // positive rewrite depth in joinability search
    std::size_t insertion_bound = 1;  // inverse-pair insertions in group overlap search
    std::size_t sample_cap = 200;     // sampled steps in positive-confluence checks
};

/// A ground rewriting system over a theory: the theory (with the constants Q
/// already in its signature), the rules R, how steps are assembled, and the
/// oriented/unoriented split of the theory axioms.
struct AlgebraicPolygraphModulo {
    CartesianPolygraph theory;
    std::vector<SymbolId> constants;
    std::vector<GroundRule> rules;
    StepPolicy policy = StepPolicy::EPRE;
    ModuloSplit split;
};

/// Assemble and validate: rule sides must be closed, well-typed and of equal
/// sort; the split is computed from the theory's modulo flags.
AlgebraicPolygraphModulo make_apm(CartesianPolygraph theory, std::vector<SymbolId> constants,
                                  std::vector<GroundRule> rules, StepPolicy policy = StepPolicy::EPRE);

const char* policy_name(StepPolicy p);
const char* paradigm_name(ParadigmKind p);

/// Everything the CLI carries around for one spec file.
struct System {
    AlgebraicPolygraphModulo apm;
    ParadigmKind paradigm = ParadigmKind::Generic;
    Bounds bounds;
    bool field = false;              // rational instead of integer coefficients
    std::vector<Term> seeds;         // declared seed terms (default: rule sides)
    // strategy description; resolved by the strategy module
    std::string strategy_name = "full";
    std::vector<Letter> letter_order; // for group-deglex, largest first
};

} // namespace apm
