#pragma once

#include "rfp/gf2m.hpp"

#include <span>
#include <vector>

namespace rfp {

/// [q-1, K] Reed-Solomon code in evaluation form: the codeword of a message
/// (m_0, ..., m_{K-1}) is f(alpha^0), ..., f(alpha^{q-2}) where
/// f(x) = sum_i m_i x^i.
///
/// Membership is tested with the N-K parity checks
///   sum_j c_j alpha^{j l} = 0,  l = 1..N-K,
/// which hold for every monomial x^i with i < K because i + l is never a
/// multiple of N.
class ReedSolomonCode {
public:
    ReedSolomonCode(FieldTable field, std::size_t dimension);

    const FieldTable& field() const noexcept { return field_; }
    std::size_t length() const noexcept { return field_.size() - 1; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t min_distance() const noexcept { return length() - dimension_ + 1; }

    SymbolVector encode(std::span<const Symbol> message) const;
    /// N-K syndrome symbols; all zero iff word is a codeword.
    std::vector<Symbol> syndrome(const SymbolVector& word) const;
    bool is_codeword(const SymbolVector& word) const;
    /// Message of a codeword by the inverse transform m_i = sum_j c_j alpha^(-ij)
    /// (N is odd, so N^-1 = 1 in characteristic 2). Only meaningful for codewords.
    std::vector<Symbol> message_of(const SymbolVector& codeword) const;
    /// The unique codeword taking `values[j]` at coordinate `positions[j]`,
    /// by Lagrange interpolation. Needs exactly K distinct positions.
    SymbolVector interpolate(std::span<const std::size_t> positions, std::span<const Symbol> values) const;

private:
    FieldTable field_;
    std::size_t dimension_;
};

/// Membership test for the [n_out, k_out] evaluation RS code over `field`.
/// Throws std::invalid_argument when word length != n_out or n_out != q-1.
bool rs_syndrome_check(const FieldTable& field, std::size_t n_out, std::size_t k_out, const SymbolVector& word);

} // namespace rfp
