#include "apm/signature.hpp"

namespace apm {

const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::UnknownConstant: return "UnknownConstant";
    case ErrorCode::UnknownTheory: return "UnknownTheory";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::SortMismatch: return "SortMismatch";
    case ErrorCode::NonFlattenableSymbol: return "NonFlattenableSymbol";
    case ErrorCode::IllTypedLinearTerm: return "IllTypedLinearTerm";
    case ErrorCode::UnsupportedModuloTheory: return "UnsupportedModuloTheory";
    case ErrorCode::MalformedStep: return "MalformedStep";
    case ErrorCode::BoundExhausted: return "BoundExhausted";
    case ErrorCode::NotLocal: return "NotLocal";
    case ErrorCode::NotLeftMonomial: return "NotLeftMonomial";
    case ErrorCode::NotRepresentable: return "NotRepresentable";
    case ErrorCode::MalformedOrder: return "MalformedOrder";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Error";
}

SortId Signature::add_sort(const std::string& name) {
    if (auto it = sort_by_name_.find(name); it != sort_by_name_.end()) return it->second;
    SortId id = static_cast<SortId>(sorts_.size());
    sorts_.push_back(Sort{name});
    sort_by_name_.emplace(name, id);
    return id;
}

SymbolId Signature::add_symbol(const std::string& name, std::vector<SortId> arity, SortId coarity) {
    if (symbol_by_name_.count(name))
        fail(ErrorCode::ParseError, "duplicate operation symbol '" + name + "'");
    for (SortId s : arity)
        if (s >= sorts_.size()) fail(ErrorCode::SortMismatch, "arity sort out of range for '" + name + "'");
    if (coarity >= sorts_.size()) fail(ErrorCode::SortMismatch, "coarity sort out of range for '" + name + "'");
    SymbolId id = static_cast<SymbolId>(symbols_.size());
    symbols_.push_back(OperationSymbol{name, std::move(arity), coarity});
    symbol_by_name_.emplace(name, id);
    return id;
}

SortId Signature::sort(const std::string& name) const {
    if (auto s = find_sort(name)) return *s;
    fail(ErrorCode::SortMismatch, "unknown sort '" + name + "'");
}

SymbolId Signature::symbol(const std::string& name) const {
    if (auto f = find_symbol(name)) return *f;
    fail(ErrorCode::UnknownSymbol, "unknown operation symbol '" + name + "'");
}

std::optional<SortId> Signature::find_sort(const std::string& name) const {
    auto it = sort_by_name_.find(name);
    if (it == sort_by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<SymbolId> Signature::find_symbol(const std::string& name) const {
    auto it = symbol_by_name_.find(name);
    if (it == symbol_by_name_.end()) return std::nullopt;
    return it->second;
}

const Sort& Signature::sort_info(SortId s) const {
    if (s >= sorts_.size()) fail(ErrorCode::SortMismatch, "sort id out of range");
    return sorts_[s];
}

const OperationSymbol& Signature::op(SymbolId f) const {
    if (f >= symbols_.size()) fail(ErrorCode::UnknownSymbol, "symbol id out of range");
    return symbols_[f];
}

std::vector<SymbolId> Signature::constants(SortId s) const {
    std::vector<SymbolId> out;
    for (SymbolId f = 0; f < symbols_.size(); ++f)
        if (symbols_[f].is_constant() && symbols_[f].coarity == s) out.push_back(f);
    return out;
}

std::vector<SymbolId> Signature::constants() const {
    std::vector<SymbolId> out;
    for (SymbolId f = 0; f < symbols_.size(); ++f)
        if (symbols_[f].is_constant()) out.push_back(f);
    return out;
}

void Signature::set_infix(SymbolId f) {
    if (op(f).arity.size() != 2)
        fail(ErrorCode::ArityMismatch, "infix sugar requires a binary symbol, got '" + op(f).name + "'");
    infix_ = f;
}

} // namespace apm
