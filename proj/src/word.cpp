#include "apm/word.hpp"

#include <algorithm>
#include <sstream>

namespace apm {

SignedWord inverse(const SignedWord& w) {
    SignedWord out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse(*it));
    return out;
}

SignedWord group_reduce(const SignedWord& w) {
    SignedWord stack;
    for (const Letter& l : w) {
        if (!stack.empty() && stack.back() == inverse(l))
            stack.pop_back();
        else
            stack.push_back(l);
    }
    return stack;
}

SignedWord concat(const SignedWord& a, const SignedWord& b) {
    SignedWord out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

int deglex_compare(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

DeglexOrder DeglexOrder::from_ranking(const std::vector<Letter>& ranked) {
    DeglexOrder o;
    o.ranked_ = ranked;
    // x < y must imply x⁻ < y⁻ (ranking is largest-first, so check pairs both ways)
    auto pos = [&](Letter l) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < ranked.size(); ++i)
            if (ranked[i] == l) return i;
        return std::nullopt;
    };
    for (std::size_t i = 0; i < ranked.size(); ++i)
        for (std::size_t j = i + 1; j < ranked.size(); ++j) {
            // the compatibility constraint relates plain generators only
            if (ranked[i].inverted || ranked[j].inverted) continue;
            auto pi = pos(inverse(ranked[i])), pj = pos(inverse(ranked[j]));
            if (pi && pj && *pi > *pj)
                fail(ErrorCode::MalformedOrder,
                     "letter order is not inverse-compatible: x > y must imply x^- > y^-");
        }
    for (std::size_t i = 0; i < ranked.size(); ++i)
        for (std::size_t j = i + 1; j < ranked.size(); ++j)
            if (ranked[i] == ranked[j]) fail(ErrorCode::MalformedOrder, "duplicate letter in order");
    return o;
}

std::size_t DeglexOrder::rank(Letter l) const {
    for (std::size_t i = 0; i < ranked_.size(); ++i)
        if (ranked_[i] == l) return ranked_.size() - 1 - i; // largest-first list -> high rank
    fail(ErrorCode::UnknownConstant, "letter not covered by the declared order");
}

int DeglexOrder::compare(const SignedWord& a, const SignedWord& b) const {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t ra = rank(a[i]), rb = rank(b[i]);
        if (ra != rb) return ra < rb ? -1 : 1;
    }
    return 0;
}

std::string word_to_string(const Signature& sig, const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (SymbolId f : w) out += sig.op(f).name;
    return out;
}

std::string word_to_string(const Signature& sig, const SignedWord& w) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += sig.op(w[i].sym).name;
        if (w[i].inverted) out += "^-";
    }
    return out;
}

namespace {

std::vector<std::string> word_tokens(const std::string& text) {
    std::vector<std::string> toks;
    if (text.find(' ') != std::string::npos) {
        std::istringstream is(text);
        std::string t;
        while (is >> t) toks.push_back(t);
    } else {
        // compact form: single-character constants, "^-" attaches to the previous letter
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text.compare(i, 2, "^-") == 0 && !toks.empty()) {
                toks.back() += "^-";
                ++i;
            } else {
                toks.emplace_back(1, text[i]);
            }
        }
    }
    return toks;
}

} // namespace

Word parse_word(const Signature& sig, const std::string& text) {
    if (text == "1") return {};
    Word out;
    for (const std::string& tok : word_tokens(text)) {
        auto f = sig.find_symbol(tok);
        if (!f || !sig.op(*f).is_constant())
            fail(ErrorCode::UnknownConstant, "'" + tok + "' is not a declared constant");
        out.push_back(*f);
    }
    return out;
}

SignedWord parse_signed_word(const Signature& sig, const std::string& text) {
    if (text == "1") return {};
    SignedWord out;
    for (std::string tok : word_tokens(text)) {
        bool inv = false;
        if (tok.size() > 2 && tok.compare(tok.size() - 2, 2, "^-") == 0) {
            inv = true;
            tok.resize(tok.size() - 2);
        }
        auto f = sig.find_symbol(tok);
        if (!f || !sig.op(*f).is_constant())
            fail(ErrorCode::UnknownConstant, "'" + tok + "' is not a declared constant");
        out.push_back(Letter{*f, inv});
    }
    return out;
}

} // namespace apm
