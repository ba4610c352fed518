#pragma once

#include <stdexcept>
#include <string>

namespace apm {

/// Every failure the library reports deliberately, keyed so callers and tests
/// can dispatch without string matching.
enum class ErrorCode {
    UnknownSymbol,
    UnknownConstant,
    UnknownTheory,
    ArityMismatch,
    SortMismatch,
    NonFlattenableSymbol,
    IllTypedLinearTerm,
    UnsupportedModuloTheory,
    MalformedStep,
    BoundExhausted,
    NotLocal,
    NotLeftMonomial,
    NotRepresentable,
    MalformedOrder,
    ParseError,
};

struct Error : std::runtime_error {
    ErrorCode code;
    Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& what) { throw Error(c, what); }

const char* error_code_name(ErrorCode c);

} // namespace apm
