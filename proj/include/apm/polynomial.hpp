#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>

#include "apm/word.hpp"

namespace apm {

using Coeff = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Formal linear combination of monomial words with exact coefficients.
/// Zero coefficients are never stored, so equality is structural.
class Polynomial {
public:
    Polynomial() = default;
    static Polynomial monomial(Word w, Coeff c = 1);
    static Polynomial zero() { return {}; }

    bool is_zero() const { return terms_.empty(); }
    const std::map<Word, Coeff>& terms() const { return terms_; }
    std::size_t monomial_count() const { return terms_.size(); }
    Coeff coeff(const Word& w) const;

    void add(const Word& w, const Coeff& c);
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial scaled(const Coeff& c) const;
    /// Word-concatenation product, extended bilinearly.
    Polynomial operator*(const Polynomial& o) const;

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }
    bool operator<(const Polynomial& o) const { return terms_ < o.terms_; }

    /// "3*xyt + (-1)*xzt", monomials in map (deg-free lex) order; zero -> "0".
    std::string to_string(const Signature& sig) const;

private:
    std::map<Word, Coeff> terms_;
};

/// Parse "3*xyt + (-1)*xzt + yz - 2*t" style input.  Monomial syntax follows
/// parse_word; coefficients are integers or (when field) rationals p/q; `-`
/// and `(+)` both act as additive separators along with `+`.
Polynomial parse_polynomial(const Signature& sig, const std::string& text, bool field);

} // namespace apm
