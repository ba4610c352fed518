#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apm/signature.hpp"

namespace apm {

/// Immutable first-order terms with maximal sharing through shared_ptr.
/// Three node kinds:
///   - application of an operation symbol (constants are 0-ary applications),
///   - variable x_i (1-based, sorted) — only inside theory axioms,
///   - hole — the marked slot of a one-hole context.
class Term {
public:
    enum class Kind : std::uint8_t { App, Var, Hole };

    Term() = default; // empty handle; only valid as a target of assignment

    static Term app(SymbolId f, std::vector<Term> args = {});
    static Term var(int index, SortId sort);
    static Term hole(SortId sort);

    bool empty() const { return node_ == nullptr; }
    Kind kind() const { return node_->kind; }
    bool is_app() const { return node_->kind == Kind::App; }
    bool is_var() const { return node_->kind == Kind::Var; }
    bool is_hole() const { return node_->kind == Kind::Hole; }

    SymbolId symbol() const;            // App only
    const std::vector<Term>& args() const; // App only
    int var_index() const;              // Var only
    SortId var_sort() const;            // Var / Hole

    /// Number of application nodes (variables and holes count 0).
    std::size_t size() const { return node_->size; }
    std::size_t hash() const { return node_->hash; }

    bool operator==(const Term& o) const;
    bool operator!=(const Term& o) const { return !(*this == o); }

    /// Fixed total order used for every canonical tie-break in the library:
    /// by size, then node kind, then symbol/variable id, then arguments
    /// lexicographically.  Stable across runs by construction.
    static int compare(const Term& a, const Term& b);
    bool operator<(const Term& o) const { return compare(*this, o) < 0; }

private:
    struct Node {
        Kind kind;
        SymbolId symbol = 0;      // App
        int var = 0;              // Var
        SortId sort = 0;          // Var / Hole
        std::vector<Term> args;   // App
        std::size_t size = 0;
        std::size_t hash = 0;
    };
    std::shared_ptr<const Node> node_;
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

/// Path of 1-based argument indices from the root; ε is the empty path.
struct Position {
    std::vector<std::uint32_t> path;

    bool is_root() const { return path.empty(); }
    std::size_t depth() const { return path.size(); }
    Position child(std::uint32_t i) const;
    bool operator==(const Position& o) const { return path == o.path; }
    bool operator<(const Position& o) const { return path < o.path; }

    /// true when this is a (non-strict) prefix of q, i.e. q lies at or below.
    bool is_prefix_of(const Position& q) const;
    static bool disjoint(const Position& p, const Position& q);
    std::string to_string() const; // "ε" or dotted "1.2"
};

Term subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, const Term& u);

/// Pre-order enumeration of every position with its subterm.
std::vector<std::pair<Position, Term>> enumerate_positions(const Term& t);

/// Ground one-hole context: a spine with exactly one hole leaf.
class Context {
public:
    Context() = default; // empty handle; only valid as a target of assignment

    static Context identity(SortId hole_sort);
    /// Punch a hole at p in t; the removed subterm's sort becomes the hole sort.
    static Context at(const Signature& sig, const Term& t, const Position& p);
    /// Wrap a bare spine (must contain exactly one hole).
    static Context of_spine(Term spine);

    const Term& spine() const { return spine_; }
    const Position& hole_position() const { return hole_; }
    SortId hole_sort() const { return hole_sort_; }
    bool is_identity() const { return hole_.is_root(); }

    Term apply(const Term& filler) const;
    /// C.compose(D) is the context C[D[□]].
    Context compose(const Context& inner) const;

    bool operator==(const Context& o) const { return spine_ == o.spine_; }

private:
    Term spine_;
    Position hole_;
    SortId hole_sort_ = 0;
};

/// Sort of a ground or open term; checks arities and argument sorts throughout.
SortId typecheck_term(const Signature& sig, const Term& t);

/// First-order matching of a (possibly open, possibly repeated-variable)
/// pattern against a closed subject.  Returns the substitution or nullopt.
using Substitution = std::map<int, Term>;
std::optional<Substitution> match(const Term& pattern, const Term& subject);

/// Instantiate every variable of pattern; unbound variables are an error.
Term substitute(const Term& pattern, const Substitution& s);

/// Variables occurring in t (sorted indices).
std::vector<int> term_variables(const Term& t);

/// Render with signature names: f(a,g(b)); infix sugar is NOT applied here.
std::string term_to_string(const Signature& sig, const Term& t);

} // namespace apm
