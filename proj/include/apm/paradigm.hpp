#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apm/system.hpp"
#include "apm/theory.hpp"
#include "apm/word.hpp"

namespace apm {

/// How a system's native notation is read, written and validated.
struct ParadigmSpec {
    ParadigmKind kind = ParadigmKind::Generic;
    bool field = false;               // linear: rational instead of integer coefficients
    std::vector<Letter> letter_order; // group: deglex ranking, largest first
    std::optional<SymbolId> infix;    // generic: infix sugar for parse/render
};

/// ModC extended with an associative monomial product `dot`, bilinear over
/// ⊕ and the scalar action and annihilated by the module zero.  The
/// product's associativity joins the unoriented part; the bilinearity rules
/// are oriented.  This is the host theory of linear systems whose monomials
/// are words.
CartesianPolygraph linear_host_theory();

/// Native text to ground term.
///   string:  compact word "sts" -> the right comb;
///   linear:  polynomial "2*yt + x" -> its canonical term;
///   group:   spaced signed word "s t s^-" -> the left comb with inversions
///            at the leaves;
///   generic: prefix term syntax (with `.` infix sugar when declared).
Term parse_native(const ParadigmSpec& p, const CartesianPolygraph& P, const std::string& text);

/// One rule "lhs => rhs" with both sides in native syntax.
GroundRule parse_native_rule(const ParadigmSpec& p, const CartesianPolygraph& P,
                             const std::string& name, const std::string& text);

/// Ground term to canonical native text; parse_native of the result is a
/// canonical representative of t's class.  Zero polynomial renders "0", the
/// empty word "1".  NotRepresentable for a linear term of scalar sort.
std::string render_native(const ParadigmSpec& p, const CartesianPolygraph& P, const Term& t);

/// Paradigm rule hygiene.  Sides are replaced by their canonical
/// arrangements (group sides are freely reduced per the reduced cellular
/// extension construction, with a diagnostic); degenerate rules (equal sides
/// after normalization) are dropped with a diagnostic.  NotLeftMonomial when
/// a linear left side is not a plain monomial.
struct ValidatedRules {
    std::vector<GroundRule> rules;
    std::vector<std::string> diagnostics;
};
ValidatedRules validate_rules(const ParadigmSpec& p, const CartesianPolygraph& P,
                              const std::vector<GroundRule>& rules);

} // namespace apm
