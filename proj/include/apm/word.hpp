#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apm/signature.hpp"

namespace apm {

/// Plain word over constant symbols (monoid elements, monomials).
using Word = std::vector<SymbolId>;

/// Letter with an inversion mark; signed words represent free-group elements.
struct Letter {
    SymbolId sym;
    bool inverted = false;
    bool operator==(const Letter& o) const { return sym == o.sym && inverted == o.inverted; }
    bool operator!=(const Letter& o) const { return !(*this == o); }
    bool operator<(const Letter& o) const {
        return sym != o.sym ? sym < o.sym : inverted < o.inverted;
    }
};
using SignedWord = std::vector<Letter>;

inline Letter inverse(Letter l) { return Letter{l.sym, !l.inverted}; }

/// Formal inverse: reverse the word and flip every letter.
SignedWord inverse(const SignedWord& w);

/// Free reduction: cancel adjacent x x⁻ pairs until none remain.
SignedWord group_reduce(const SignedWord& w);

SignedWord concat(const SignedWord& a, const SignedWord& b);
Word concat(const Word& a, const Word& b);

/// Degree-lexicographic comparison on plain words with the base order
/// "declaration id ascending" unless a rank permutation is supplied.
int deglex_compare(const Word& a, const Word& b);

/// Total order on signed-word letters for the group strategy: a user-chosen
/// ranking of Q ⊔ Q⁻ constrained so that x < y implies x⁻ < y⁻.
class DeglexOrder {
public:
    /// ranked: all letters from largest to smallest (the CLI's `s > t > s^- > t^-`).
    static DeglexOrder from_ranking(const std::vector<Letter>& ranked);
    /// rank 0 = smallest
    std::size_t rank(Letter l) const;
    /// degree first, then lexicographic by rank (larger rank = larger letter)
    int compare(const SignedWord& a, const SignedWord& b) const;
    bool less(const SignedWord& a, const SignedWord& b) const { return compare(a, b) < 0; }
    const std::vector<Letter>& ranking() const { return ranked_; }

private:
    std::vector<Letter> ranked_; // largest first
};

std::string word_to_string(const Signature& sig, const Word& w);       // compact: "sts", empty = "1"
std::string word_to_string(const Signature& sig, const SignedWord& w); // spaced: "s t s^-", empty = "1"

/// Parse a plain word: with spaces, tokens are constant names; without, each
/// character names a constant.  Throws UnknownConstant.
Word parse_word(const Signature& sig, const std::string& text);
/// Same token rules, with a trailing `^-` inverting the preceding letter.
SignedWord parse_signed_word(const Signature& sig, const std::string& text);

} // namespace apm
