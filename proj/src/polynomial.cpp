#include "apm/polynomial.hpp"

#include <cctype>
#include <sstream>

namespace apm {

Polynomial Polynomial::monomial(Word w, Coeff c) {
    Polynomial p;
    p.add(w, c);
    return p;
}

Coeff Polynomial::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Coeff(0) : it->second;
}

void Polynomial::add(const Word& w, const Coeff& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [w, c] : o.terms_) add(w, -c);
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial p = *this;
    p += o;
    return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial p = *this;
    p -= o;
    return p;
}

Polynomial Polynomial::operator-() const {
    Polynomial p;
    for (const auto& [w, c] : terms_) p.terms_.emplace(w, -c);
    return p;
}

Polynomial Polynomial::scaled(const Coeff& c) const {
    Polynomial p;
    if (c == 0) return p;
    for (const auto& [w, k] : terms_) p.terms_.emplace(w, k * c);
    return p;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial p;
    for (const auto& [w1, c1] : terms_)
        for (const auto& [w2, c2] : o.terms_) p.add(concat(w1, w2), c1 * c2);
    return p;
}

namespace {

std::string coeff_to_string(const Coeff& c) {
    std::ostringstream os;
    if (c < 0)
        os << "(" << c << ")";
    else
        os << c;
    return os.str();
}

} // namespace

std::string Polynomial::to_string(const Signature& sig) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        if (w.empty())
            out += coeff_to_string(c);
        else if (c == 1)
            out += word_to_string(sig, w);
        else
            out += coeff_to_string(c) + "*" + word_to_string(sig, w);
    }
    return out;
}

Polynomial parse_polynomial(const Signature& sig, const std::string& text, bool field) {
    Polynomial out;
    std::size_t i = 0;
    auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    auto err = [&](const std::string& m) {
        fail(ErrorCode::ParseError, m + " at offset " + std::to_string(i) + " in '" + text + "'");
    };
    auto digits = [&]() -> Integer {
        std::size_t s = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == s) err("expected number");
        return Integer(text.substr(s, i - s));
    };
    auto number = [&]() -> Coeff {
        bool neg = false;
        if (i < text.size() && text[i] == '-') {
            neg = true;
            ++i;
        }
        Integer num = digits();
        Integer den = 1;
        if (i < text.size() && text[i] == '/') {
            ++i;
            den = digits();
            if (!field) err("rational coefficient needs `field` mode");
            if (den == 0) err("zero denominator");
        }
        Coeff c(num, den);
        return neg ? -c : c;
    };

    bool expect_term = true;
    bool any_term = false;
    int sign = 1;
    skip();
    while (i < text.size()) {
        if (!expect_term) {
            // separator: +, -, or (+)
            if (text.compare(i, 3, "(+)") == 0) {
                i += 3;
                sign = 1;
            } else if (text[i] == '+') {
                ++i;
                sign = 1;
            } else if (text[i] == '-') {
                ++i;
                sign = -1;
            } else {
                err("expected '+', '-' or '(+)'");
            }
            expect_term = true;
            skip();
            continue;
        }
        // term: ['-'] [coeff ['*']] [word]
        if (text[i] == '-') {
            sign = -sign;
            ++i;
            skip();
            if (i >= text.size()) err("expected term after '-'");
        }
        Coeff c = sign;
        bool have_coeff = false;
        if (text[i] == '(' && text.compare(i, 3, "(+)") != 0) {
            ++i;
            skip();
            c *= number();
            skip();
            if (i >= text.size() || text[i] != ')') err("expected ')'");
            ++i;
            have_coeff = true;
        } else if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            c *= number();
            have_coeff = true;
        }
        skip();
        if (have_coeff && i < text.size() && text[i] == '*') {
            ++i;
            skip();
        }
        std::size_t s = i;
        while (i < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
            ++i;
        std::string wtok = text.substr(s, i - s);
        if (wtok.empty()) {
            if (!have_coeff) err("expected monomial");
            out.add({}, c); // bare number: constant term ("0" contributes nothing)
        } else {
            out.add(parse_word(sig, wtok), c);
        }
        expect_term = false;
        any_term = true;
        sign = 1;
        skip();
    }
    if (expect_term && any_term) fail(ErrorCode::ParseError, "dangling separator in '" + text + "'");
    return out;
}

} // namespace apm
