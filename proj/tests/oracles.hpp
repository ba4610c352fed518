#pragma once

// Brute-force reference implementations the tests check the library against.
// Everything here is deliberately naive and independent of the library's own
// matching / normalization machinery; only the Term data type is shared.

#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "apm/theory.hpp"
#include "apm/word.hpp"

namespace oracle {

using apm::Letter;
using apm::SignedWord;
using apm::Term;
using apm::TheoryRule;
using apm::Word;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// ---- naive term matching ---------------------------------------------------

inline bool o_match(const Term& pat, const Term& sub, std::map<int, Term>& out) {
    if (pat.is_var()) {
        auto it = out.find(pat.var_index());
        if (it == out.end()) {
            out.emplace(pat.var_index(), sub);
            return true;
        }
        return it->second == sub;
    }
    if (!pat.is_app() || !sub.is_app() || pat.symbol() != sub.symbol() ||
        pat.args().size() != sub.args().size())
        return false;
    for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!o_match(pat.args()[i], sub.args()[i], out)) return false;
    return true;
}

inline Term o_subst(const Term& pat, const std::map<int, Term>& s) {
    if (pat.is_var()) return s.at(pat.var_index());
    std::vector<Term> args;
    for (const Term& a : pat.args()) args.push_back(o_subst(a, s));
    return Term::app(pat.symbol(), std::move(args));
}

inline bool o_vars_covered(const Term& rhs, const std::map<int, Term>& s) {
    if (rhs.is_var()) return s.count(rhs.var_index()) != 0;
    if (!rhs.is_app()) return false;
    for (const Term& a : rhs.args())
        if (!o_vars_covered(a, s)) return false;
    return true;
}

/// All one-directional rewrites of t by l -> r at any position.  Instances
/// whose rhs has variables unbound by the lhs are skipped.
inline void o_rewrites_dir(const Term& t, const Term& l, const Term& r, std::vector<Term>& out) {
    std::map<int, Term> s;
    if (o_match(l, t, s) && o_vars_covered(r, s)) out.push_back(o_subst(r, s));
    if (!t.is_app()) return;
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        std::vector<Term> inner;
        o_rewrites_dir(t.args()[i], l, r, inner);
        for (const Term& u : inner) {
            std::vector<Term> args = t.args();
            args[i] = u;
            out.push_back(Term::app(t.symbol(), std::move(args)));
        }
    }
}

/// Bounded closure of t under the axioms, both directions.
inline std::set<Term> o_closure(const std::vector<TheoryRule>& axioms, const Term& t, std::size_t cap) {
    std::set<Term> seen{t};
    std::deque<Term> queue{t};
    while (!queue.empty() && seen.size() < cap) {
        Term cur = queue.front();
        queue.pop_front();
        std::vector<Term> next;
        for (const TheoryRule& ax : axioms) {
            o_rewrites_dir(cur, ax.lhs, ax.rhs, next);
            o_rewrites_dir(cur, ax.rhs, ax.lhs, next);
        }
        for (const Term& u : next)
            if (seen.size() < cap && seen.insert(u).second) queue.push_back(u);
    }
    return seen;
}

// ---- word rewriting --------------------------------------------------------

/// All single-step results of applying any rule at any occurrence.
inline std::vector<Word> o_word_steps(const std::vector<std::pair<Word, Word>>& rules, const Word& w) {
    std::vector<Word> out;
    for (const auto& [l, r] : rules) {
        if (l.size() > w.size()) continue;
        for (std::size_t i = 0; i + l.size() <= w.size(); ++i) {
            if (!std::equal(l.begin(), l.end(), w.begin() + i)) continue;
            Word res(w.begin(), w.begin() + i);
            res.insert(res.end(), r.begin(), r.end());
            res.insert(res.end(), w.begin() + i + l.size(), w.end());
            out.push_back(std::move(res));
        }
    }
    return out;
}

inline std::set<Word> o_word_reachable(const std::vector<std::pair<Word, Word>>& rules, const Word& w,
                                       std::size_t depth, std::size_t cap = 100000) {
    std::set<Word> seen{w};
    std::deque<std::pair<Word, std::size_t>> queue{{w, 0}};
    while (!queue.empty()) {
        auto [cur, d] = queue.front();
        queue.pop_front();
        if (d == depth) continue;
        for (Word& n : o_word_steps(rules, cur)) {
            if (seen.size() >= cap) return seen;
            if (seen.insert(n).second) queue.emplace_back(std::move(n), d + 1);
        }
    }
    return seen;
}

inline bool o_word_joinable(const std::vector<std::pair<Word, Word>>& rules, const Word& a, const Word& b,
                            std::size_t depth) {
    auto ra = o_word_reachable(rules, a, depth);
    auto rb = o_word_reachable(rules, b, depth);
    for (const Word& w : ra)
        if (rb.count(w)) return true;
    return false;
}

/// Offsets at which lhs1 and lhs2 overlap in a word (proper suffix/prefix
/// overlaps and factor containments, both orders), as pairs (shift of lhs2
/// relative to lhs1).  Excludes the trivial equal-rule-equal-shift case when
/// asked to.
inline std::vector<long> o_word_overlaps(const Word& l1, const Word& l2, bool same_rule) {
    std::vector<long> out;
    long n1 = static_cast<long>(l1.size()), n2 = static_cast<long>(l2.size());
    for (long shift = -(n2 - 1); shift <= n1 - 1; ++shift) {
        if (same_rule && shift == 0) continue;
        bool ok = true, touched = false;
        for (long i = 0; i < n2; ++i) {
            long j = shift + i;
            if (j < 0 || j >= n1) continue;
            touched = true;
            if (l1[static_cast<std::size_t>(j)] != l2[static_cast<std::size_t>(i)]) {
                ok = false;
                break;
            }
        }
        if (ok && touched) out.push_back(shift);
    }
    return out;
}

// ---- signed words ----------------------------------------------------------

inline SignedWord o_free_reduce(SignedWord w) {
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (w[i].sym == w[i + 1].sym && w[i].inverted != w[i + 1].inverted) {
                w.erase(w.begin() + i, w.begin() + i + 2);
                changed = true;
                break;
            }
        }
    }
    return w;
}

// ---- graphs ----------------------------------------------------------------

/// BFS distance from start to the nearest node satisfying pred; -1 if none
/// reachable.
template <typename Node, typename Succ, typename Pred>
long o_bfs_distance(const Node& start, Succ succ, Pred pred, std::size_t cap = 100000) {
    std::set<Node> seen{start};
    std::deque<std::pair<Node, long>> queue{{start, 0}};
    while (!queue.empty()) {
        auto [cur, d] = queue.front();
        queue.pop_front();
        if (pred(cur)) return d;
        for (const Node& n : succ(cur)) {
            if (seen.size() >= cap) break;
            if (seen.insert(n).second) queue.emplace_back(n, d + 1);
        }
    }
    return -1;
}

} // namespace oracle
