#include "rfp/validation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rfp {

std::string_view to_string(VerdictDetail detail) {
    switch (detail) {
    case VerdictDetail::AcceptedAssigned: return "AcceptedAssigned";
    case VerdictDetail::AcceptedParityCheck: return "AcceptedParityCheck";
    case VerdictDetail::AcceptedConcat: return "AcceptedConcat";
    case VerdictDetail::RejectedInner: return "RejectedInner";
    case VerdictDetail::RejectedOuter: return "RejectedOuter";
    case VerdictDetail::RejectedLookup: return "RejectedLookup";
    case VerdictDetail::RejectedParityCheck: return "RejectedParityCheck";
    }
    return "Unknown";
}

LookupValidator::LookupValidator(const Codebook& cb) : sorted_(cb.fingerprints), length_(cb.length()) {
    std::sort(sorted_.begin(), sorted_.end());
}

ValidationVerdict LookupValidator::validate(const SymbolVector& y) const {
    if (sorted_.empty())
        return {false, VerdictDetail::RejectedLookup, std::nullopt};
    if (y.size() != length_)
        throw std::invalid_argument("validate_lookup: fingerprint length " + std::to_string(y.size()) +
                                    " != codebook length " + std::to_string(length_));
    if (std::binary_search(sorted_.begin(), sorted_.end(), y))
        return {true, VerdictDetail::AcceptedAssigned, std::nullopt};
    return {false, VerdictDetail::RejectedLookup, std::nullopt};
}

ValidationVerdict validate_lookup(const Codebook& cb, const SymbolVector& y) { return LookupValidator(cb).validate(y); }

ValidationVerdict validate_linear(const LinearCodeInstance& code, const SymbolVector& y) {
    if (y.size() != code.length() || !y.is_binary())
        throw std::invalid_argument("validate_linear: expected a binary word of length " +
                                    std::to_string(code.length()));
    if (code.parity_check.annihilates(y.bits()))
        return {true, VerdictDetail::AcceptedParityCheck, std::nullopt};
    return {false, VerdictDetail::RejectedParityCheck, std::nullopt};
}

ValidationVerdict validate_linear(const QaryLinearCodeInstance& code, const SymbolVector& y) {
    if (y.size() != code.length() || y.bits_per_symbol() != code.field.bits())
        throw std::invalid_argument("validate_linear: expected a word of length " + std::to_string(code.length()) +
                                    " over GF(" + std::to_string(code.field.size()) + ")");
    if (code.contains(y))
        return {true, VerdictDetail::AcceptedParityCheck, std::nullopt};
    return {false, VerdictDetail::RejectedParityCheck, std::nullopt};
}

std::optional<SymbolVector> decode_inner_blocks(const ConcatenatedCodeInstance& inst, const SymbolVector& y,
                                                std::size_t* failed) {
    if (y.size() != inst.length() || !y.is_binary())
        throw std::invalid_argument("validate_concatenated: expected a binary word of length " +
                                    std::to_string(inst.length()));
    const std::size_t m = inst.inner_length;
    const BitVector& bits = y.bits();
    SymbolVector outer_word(inst.outer_length(), inst.params.field_bits);
    for (std::size_t i = 0; i < inst.outer_length(); ++i) {
        const Codebook& inner = inst.inner[i];
        std::size_t match = inner.size();
        for (std::size_t v = 0; v < inner.size(); ++v) {
            if (bits.equals_range(i * m, inner[v].bits())) {
                match = v;
                break;
            }
        }
        if (match == inner.size()) {
            if (failed != nullptr)
                *failed = i;
            return std::nullopt;
        }
        outer_word.set(i, static_cast<Symbol>(match));
    }
    return outer_word;
}

ValidationVerdict validate_concatenated(const ConcatenatedCodeInstance& inst, const SymbolVector& y) {
    std::size_t failed = 0;
    const auto outer_word = decode_inner_blocks(inst, y, &failed);
    if (!outer_word)
        return {false, VerdictDetail::RejectedInner, failed};
    if (!inst.outer.is_codeword(*outer_word))
        return {false, VerdictDetail::RejectedOuter, std::nullopt};
    return {true, VerdictDetail::AcceptedConcat, std::nullopt};
}

} // namespace rfp
