#include "apm/term.hpp"

#include <algorithm>
#include <sstream>

namespace apm {

namespace {

std::size_t hash_mix(std::size_t h, std::size_t v) {
    // boost::hash_combine recipe
    return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

} // namespace

Term Term::app(SymbolId f, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    n->symbol = f;
    n->size = 1;
    std::size_t h = hash_mix(0x61707000u, f);
    for (const Term& a : args) {
        n->size += a.size();
        h = hash_mix(h, a.hash());
    }
    n->hash = h;
    n->args = std::move(args);
    return Term(std::move(n));
}

Term Term::var(int index, SortId sort) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->var = index;
    n->sort = sort;
    n->size = 0;
    n->hash = hash_mix(hash_mix(0x76617200u, static_cast<std::size_t>(index)), sort);
    return Term(std::move(n));
}

Term Term::hole(SortId sort) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Hole;
    n->sort = sort;
    n->size = 0;
    n->hash = hash_mix(0x686f6c00u, sort);
    return Term(std::move(n));
}

SymbolId Term::symbol() const { return node_->symbol; }
const std::vector<Term>& Term::args() const { return node_->args; }
int Term::var_index() const { return node_->var; }
SortId Term::var_sort() const { return node_->sort; }

bool Term::operator==(const Term& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (node_->hash != o.node_->hash || node_->size != o.node_->size) return false;
    return compare(*this, o) == 0;
}

int Term::compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    auto ka = static_cast<int>(a.kind()), kb = static_cast<int>(b.kind());
    if (ka != kb) return ka < kb ? -1 : 1;
    switch (a.kind()) {
    case Kind::App: {
        if (a.symbol() != b.symbol()) return a.symbol() < b.symbol() ? -1 : 1;
        const auto& as = a.node_->args;
        const auto& bs = b.node_->args;
        if (as.size() != bs.size()) return as.size() < bs.size() ? -1 : 1;
        for (std::size_t i = 0; i < as.size(); ++i)
            if (int c = compare(as[i], bs[i])) return c;
        return 0;
    }
    case Kind::Var:
        if (a.var_index() != b.var_index()) return a.var_index() < b.var_index() ? -1 : 1;
        if (a.var_sort() != b.var_sort()) return a.var_sort() < b.var_sort() ? -1 : 1;
        return 0;
    case Kind::Hole:
        if (a.var_sort() != b.var_sort()) return a.var_sort() < b.var_sort() ? -1 : 1;
        return 0;
    }
    return 0;
}

Position Position::child(std::uint32_t i) const {
    Position q = *this;
    q.path.push_back(i);
    return q;
}

bool Position::is_prefix_of(const Position& q) const {
    if (path.size() > q.path.size()) return false;
    for (std::size_t i = 0; i < path.size(); ++i)
        if (path[i] != q.path[i]) return false;
    return true;
}

bool Position::disjoint(const Position& p, const Position& q) {
    return !p.is_prefix_of(q) && !q.is_prefix_of(p);
}

std::string Position::to_string() const {
    if (path.empty()) return "ε";
    std::ostringstream os;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) os << '.';
        os << path[i];
    }
    return os.str();
}

Term subterm_at(const Term& t, const Position& p) {
    Term cur = t;
    for (std::uint32_t i : p.path) {
        if (!cur.is_app() || i < 1 || i > cur.args().size())
            fail(ErrorCode::MalformedStep, "position " + p.to_string() + " not valid in term");
        cur = cur.args()[i - 1];
    }
    return cur;
}

Term replace_at(const Term& t, const Position& p, const Term& u) {
    if (p.is_root()) return u;
    std::uint32_t i = p.path.front();
    if (!t.is_app() || i < 1 || i > t.args().size())
        fail(ErrorCode::MalformedStep, "position " + p.to_string() + " not valid in term");
    Position rest;
    rest.path.assign(p.path.begin() + 1, p.path.end());
    std::vector<Term> args = t.args();
    args[i - 1] = replace_at(args[i - 1], rest, u);
    return Term::app(t.symbol(), std::move(args));
}

namespace {
void enum_rec(const Term& t, Position& here, std::vector<std::pair<Position, Term>>& out) {
    out.emplace_back(here, t);
    if (t.is_app())
        for (std::uint32_t i = 1; i <= t.args().size(); ++i) {
            here.path.push_back(i);
            enum_rec(t.args()[i - 1], here, out);
            here.path.pop_back();
        }
}
} // namespace

std::vector<std::pair<Position, Term>> enumerate_positions(const Term& t) {
    std::vector<std::pair<Position, Term>> out;
    Position p;
    enum_rec(t, p, out);
    return out;
}

Context Context::identity(SortId hole_sort) {
    Context c;
    c.spine_ = Term::hole(hole_sort);
    c.hole_sort_ = hole_sort;
    return c;
}

Context Context::at(const Signature& sig, const Term& t, const Position& p) {
    Term sub = subterm_at(t, p);
    SortId s;
    if (sub.is_app())
        s = sig.op(sub.symbol()).coarity;
    else
        s = sub.var_sort();
    Context c;
    c.spine_ = replace_at(t, p, Term::hole(s));
    c.hole_ = p;
    c.hole_sort_ = s;
    return c;
}

namespace {
bool find_hole(const Term& t, Position& here, Position& out, SortId& sort, int& count) {
    if (t.is_hole()) {
        ++count;
        out = here;
        sort = t.var_sort();
        return count == 1;
    }
    if (t.is_app())
        for (std::uint32_t i = 1; i <= t.args().size(); ++i) {
            here.path.push_back(i);
            find_hole(t.args()[i - 1], here, out, sort, count);
            here.path.pop_back();
        }
    return count == 1;
}
} // namespace

Context Context::of_spine(Term spine) {
    Context c;
    Position here, hole;
    SortId sort = 0;
    int count = 0;
    find_hole(spine, here, hole, sort, count);
    if (count != 1)
        fail(ErrorCode::MalformedStep, "context spine must contain exactly one hole, found " + std::to_string(count));
    c.spine_ = std::move(spine);
    c.hole_ = hole;
    c.hole_sort_ = sort;
    return c;
}

Term Context::apply(const Term& filler) const { return replace_at(spine_, hole_, filler); }

Context Context::compose(const Context& inner) const {
    Context c;
    c.spine_ = replace_at(spine_, hole_, inner.spine_);
    c.hole_ = hole_;
    c.hole_.path.insert(c.hole_.path.end(), inner.hole_.path.begin(), inner.hole_.path.end());
    c.hole_sort_ = inner.hole_sort_;
    return c;
}

SortId typecheck_term(const Signature& sig, const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Hole:
        if (t.var_sort() >= sig.sort_count()) fail(ErrorCode::SortMismatch, "variable sort out of range");
        return t.var_sort();
    case Term::Kind::App: {
        const OperationSymbol& f = sig.op(t.symbol()); // throws UnknownSymbol if out of range
        if (t.args().size() != f.arity.size())
            fail(ErrorCode::ArityMismatch,
                 "'" + f.name + "' expects " + std::to_string(f.arity.size()) + " arguments, got " +
                     std::to_string(t.args().size()));
        for (std::size_t i = 0; i < t.args().size(); ++i) {
            SortId got = typecheck_term(sig, t.args()[i]);
            if (got != f.arity[i])
                fail(ErrorCode::SortMismatch, "argument " + std::to_string(i + 1) + " of '" + f.name +
                                                  "' has sort " + sig.sort_info(got).name + ", expected " +
                                                  sig.sort_info(f.arity[i]).name);
        }
        return f.coarity;
    }
    }
    fail(ErrorCode::SortMismatch, "unreachable term kind");
}

namespace {
bool match_rec(const Term& pat, const Term& sub, Substitution& s) {
    switch (pat.kind()) {
    case Term::Kind::Var: {
        auto [it, fresh] = s.emplace(pat.var_index(), sub);
        return fresh || it->second == sub;
    }
    case Term::Kind::Hole:
        return sub.is_hole() && sub.var_sort() == pat.var_sort();
    case Term::Kind::App:
        if (!sub.is_app() || sub.symbol() != pat.symbol() || sub.args().size() != pat.args().size())
            return false;
        for (std::size_t i = 0; i < pat.args().size(); ++i)
            if (!match_rec(pat.args()[i], sub.args()[i], s)) return false;
        return true;
    }
    return false;
}
} // namespace

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
    Substitution s;
    if (match_rec(pattern, subject, s)) return s;
    return std::nullopt;
}

Term substitute(const Term& pattern, const Substitution& s) {
    switch (pattern.kind()) {
    case Term::Kind::Var: {
        auto it = s.find(pattern.var_index());
        if (it == s.end())
            fail(ErrorCode::MalformedStep, "unbound variable x" + std::to_string(pattern.var_index()) +
                                               " in substitution");
        return it->second;
    }
    case Term::Kind::Hole:
        return pattern;
    case Term::Kind::App: {
        std::vector<Term> args;
        args.reserve(pattern.args().size());
        for (const Term& a : pattern.args()) args.push_back(substitute(a, s));
        return Term::app(pattern.symbol(), std::move(args));
    }
    }
    fail(ErrorCode::MalformedStep, "unreachable term kind");
}

namespace {
void vars_rec(const Term& t, std::vector<int>& out) {
    if (t.is_var()) {
        out.push_back(t.var_index());
    } else if (t.is_app()) {
        for (const Term& a : t.args()) vars_rec(a, out);
    }
}
} // namespace

std::vector<int> term_variables(const Term& t) {
    std::vector<int> out;
    vars_rec(t, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string term_to_string(const Signature& sig, const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Var:
        return "x" + std::to_string(t.var_index());
    case Term::Kind::Hole:
        return "[]";
    case Term::Kind::App: {
        std::string out = sig.op(t.symbol()).name;
        if (t.args().empty()) return out;
        out += '(';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) out += ',';
            out += term_to_string(sig, t.args()[i]);
        }
        out += ')';
        return out;
    }
    }
    return "?";
}

} // namespace apm
