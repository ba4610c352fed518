#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apm/engine.hpp"

namespace apm {

enum class StrategyKind { Full, NfModulo, GroupDeglex };
const char* strategy_kind_name(StrategyKind k);

/// Positive strategy σ: the fiber over each quotient class is infinite, so σ
/// is carried intensionally as a membership predicate plus a deterministic
/// chooser instead of a set.
struct PositiveStrategy {
    StrategyKind kind = StrategyKind::Full;
    std::optional<DeglexOrder> order; // GroupDeglex only

    static PositiveStrategy full() { return {StrategyKind::Full, std::nullopt}; }
    static PositiveStrategy nf_modulo() { return {StrategyKind::NfModulo, std::nullopt}; }
    static PositiveStrategy group_deglex(DeglexOrder o) {
        return {StrategyKind::GroupDeglex, std::move(o)};
    }
};

/// Build the strategy a System declares (strategy_name + letter_order).  A
/// group-deglex order written over plain constants is extended with their
/// inverses in the same relative order (s > t becomes s > t > s⁻ > t⁻); an
/// empty order defaults to the declared constants in declaration order.
/// ParseError on unknown names, MalformedOrder on incompatible orders.
PositiveStrategy resolve_strategy(const System& sys);

/// σ-positivity of a step, decided on its display apply_trace(source, pre):
///   FULL          always true;
///   NF_MODULO     the display is a normal form of the oriented split modulo
///                 the unoriented one (bounded class scan for non-linear
///                 paradigms);
///   GROUP_DEGLEX  the display has one of the rule-anchored shapes
///                 μ(μ(u,r₁^ε),v) / μ(u,μ(r₁^ε,v)) (u, v reduced, possibly
///                 absent) and replacing r₁^ε by r₂^ε strictly decreases the
///                 reduced word under the deglex order.
bool is_positive(const System& sys, const PositiveStrategy& sigma, const RewritingStep& step);

/// Deterministic member of σ(class of t), equivalent to t.  GROUP_DEGLEX
/// picks the least rule-anchored display of the class and falls back to the
/// canonical reduced term when none exists.  BoundExhausted possible for
/// generic theories.
Term sigma_representative(const System& sys, const PositiveStrategy& sigma, const Term& t);

enum class PositiveVerdict { HoldsOnSample, Counterexample, Unknown };
const char* positive_verdict_name(PositiveVerdict v);

struct PositiveConfluenceReport {
    PositiveVerdict verdict = PositiveVerdict::Unknown;
    std::size_t samples = 0;
    std::optional<RewritingStep> counterexample;
    std::string detail;
};

/// Bounded positive-confluence check: sample steps from the reachability
/// graph of the seeds (default: rule sides) and, for each step, look for a
/// representative plus σ-positive closings a′ and b′ of length at most 1
/// whose ends are equivalent.  For GROUP_DEGLEX a deglex-increasing step is
/// closed constructively by the reverse-anchored positive step
/// u·r₂^ε ⟨r₁^{-ε}⟩ r₁^ε·v, built and replay-validated on the spot.
PositiveConfluenceReport positive_confluence_check(const System& sys, const PositiveStrategy& sigma,
                                                   const std::vector<Term>& seeds = {});

} // namespace apm
