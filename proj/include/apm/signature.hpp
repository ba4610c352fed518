#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apm/errors.hpp"

namespace apm {

using SortId = std::uint32_t;
using SymbolId = std::uint32_t;

struct Sort {
    std::string name;
};

/// A typed operation f : s1 ... sk -> s.  Constants are operations with empty
/// arity; they double as the generator alphabet Q once a system is assembled.
struct OperationSymbol {
    std::string name;
    std::vector<SortId> arity;
    SortId coarity = 0;

    bool is_constant() const { return arity.empty(); }
};

/// Immutable after construction in practice: theories build one, systems
/// extend it by appending constants (existing ids stay stable).
class Signature {
public:
    SortId add_sort(const std::string& name);
    SymbolId add_symbol(const std::string& name, std::vector<SortId> arity, SortId coarity);

    SortId sort(const std::string& name) const;
    SymbolId symbol(const std::string& name) const;
    std::optional<SortId> find_sort(const std::string& name) const;
    std::optional<SymbolId> find_symbol(const std::string& name) const;

    const Sort& sort_info(SortId s) const;
    const OperationSymbol& op(SymbolId f) const;
    std::size_t sort_count() const { return sorts_.size(); }
    std::size_t symbol_count() const { return symbols_.size(); }

    /// Constants of a given sort, in declaration order.
    std::vector<SymbolId> constants(SortId s) const;
    std::vector<SymbolId> constants() const;

    /// The one binary symbol the `.` infix sugar refers to, if declared.
    void set_infix(SymbolId f);
    std::optional<SymbolId> infix() const { return infix_; }

private:
    std::vector<Sort> sorts_;
    std::vector<OperationSymbol> symbols_;
    std::map<std::string, SortId> sort_by_name_;
    std::map<std::string, SymbolId> symbol_by_name_;
    std::optional<SymbolId> infix_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

} // namespace apm
