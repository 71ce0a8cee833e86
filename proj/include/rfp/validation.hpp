#pragma once

#include "rfp/ensembles.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace rfp {

enum class VerdictDetail {
    AcceptedAssigned,
    AcceptedParityCheck,
    AcceptedConcat,
    RejectedInner,
    RejectedOuter,
    RejectedLookup,
    RejectedParityCheck,
};

std::string_view to_string(VerdictDetail detail);

struct ValidationVerdict {
    bool valid = false;
    VerdictDetail detail = VerdictDetail::RejectedLookup;
    /// Outer coordinate of the first unmatched block (RejectedInner only).
    std::optional<std::size_t> coordinate;

    bool operator==(const ValidationVerdict&) const = default;
};

/// Membership in the assigned set via binary search over a sorted copy of
/// the codebook, built once.
class LookupValidator {
public:
    explicit LookupValidator(const Codebook& cb);
    ValidationVerdict validate(const SymbolVector& y) const;

private:
    std::vector<SymbolVector> sorted_;
    std::size_t length_ = 0;
};

ValidationVerdict validate_lookup(const Codebook& cb, const SymbolVector& y);
/// Accepts every solution of H y = 0, assigned or not.
ValidationVerdict validate_linear(const LinearCodeInstance& code, const SymbolVector& y);
ValidationVerdict validate_linear(const QaryLinearCodeInstance& code, const SymbolVector& y);
/// Step 1: each length-m block must equal one of the q inner codewords of its
/// coordinate (exact match, first match in symbol order). Step 2: the recovered
/// q-ary word must pass the RS parity checks.
ValidationVerdict validate_concatenated(const ConcatenatedCodeInstance& inst, const SymbolVector& y);
/// Step 1 alone; nullopt on the first unmatched block (its index is written to
/// *failed when given).
std::optional<SymbolVector> decode_inner_blocks(const ConcatenatedCodeInstance& inst, const SymbolVector& y,
                                                std::size_t* failed = nullptr);

} // namespace rfp
