#include "apm/term_parser.hpp"

#include <cctype>

namespace apm {

namespace {

struct Parser {
    const Signature& sig;
    const std::string& text;
    std::size_t pos = 0;
    bool allow_vars;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool ident_char(char c) const {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    [[noreturn]] void err(const std::string& msg) {
        fail(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos) + " in '" + text + "'");
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        if (pos == start) err("expected identifier");
        return text.substr(start, pos - start);
    }

    Term primary() {
        skip_ws();
        if (pos >= text.size()) err("unexpected end of input");
        if (text[pos] == '(') {
            ++pos;
            Term t = expr();
            if (!eat(')')) err("expected ')'");
            return t;
        }
        std::string name = ident();
        if (eat('(')) {
            SymbolId f = sig.symbol(name);
            std::vector<Term> args;
            if (!eat(')')) {
                do {
                    args.push_back(expr());
                } while (eat(','));
                if (!eat(')')) err("expected ')'");
            }
            return Term::app(f, std::move(args));
        }
        if (auto f = sig.find_symbol(name)) {
            if (!sig.op(*f).is_constant()) err("operation '" + name + "' used without arguments");
            return Term::app(*f);
        }
        if (allow_vars && name.size() >= 2 && name[0] == 'x' &&
            name.find_first_not_of("0123456789", 1) == std::string::npos)
            return Term::var(std::stoi(name.substr(1)), 0);
        fail(ErrorCode::UnknownSymbol, "unknown symbol '" + name + "' in term '" + text + "'");
    }

    Term expr() {
        Term left = primary();
        for (;;) {
            skip_ws();
            if (pos < text.size() && text[pos] == '.') {
                if (!sig.infix()) err("no infix symbol declared for '.'");
                ++pos;
                Term right = primary();
                left = Term::app(*sig.infix(), {left, right});
            } else {
                return left;
            }
        }
    }
};

/// Rebuild assigning each variable the sort its argument slot demands.
Term assign_var_sorts(const Signature& sig, const Term& t, SortId expected) {
    switch (t.kind()) {
    case Term::Kind::Var:
        return Term::var(t.var_index(), expected);
    case Term::Kind::Hole:
        return t;
    case Term::Kind::App: {
        const OperationSymbol& f = sig.op(t.symbol());
        if (t.args().size() != f.arity.size())
            fail(ErrorCode::ArityMismatch, "'" + f.name + "' expects " + std::to_string(f.arity.size()) +
                                               " arguments, got " + std::to_string(t.args().size()));
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (std::size_t i = 0; i < t.args().size(); ++i)
            args.push_back(assign_var_sorts(sig, t.args()[i], f.arity[i]));
        return Term::app(t.symbol(), std::move(args));
    }
    }
    fail(ErrorCode::ParseError, "unreachable");
}

} // namespace

Term parse_term(const Signature& sig, const std::string& text, bool allow_vars) {
    Parser p{sig, text, 0, allow_vars};
    Term t = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.err("trailing input");
    SortId root = t.is_app() ? sig.op(t.symbol()).coarity : SortId{0};
    t = assign_var_sorts(sig, t, root);
    typecheck_term(sig, t);
    return t;
}

} // namespace apm
