#pragma once

#include <string>

#include "apm/term.hpp"

namespace apm {

/// Parse prefix syntax `f(a,g(b))` over the signature's symbol names, with
/// `.` usable as left-associative infix sugar for the signature's declared
/// infix symbol: `(s.t).s` == `mu(mu(s,t),s)`.
///
/// With allow_vars, tokens `x1`, `x2`, ... not naming a declared symbol parse
/// as variables; their sorts are inferred from the argument slots they occupy.
/// The result is typechecked before being returned.
Term parse_term(const Signature& sig, const std::string& text, bool allow_vars = false);

} // namespace apm
