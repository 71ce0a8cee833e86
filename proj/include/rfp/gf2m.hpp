#pragma once

#include "rfp/symbol_vector.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rfp {

/// GF(2^s) arithmetic through log/antilog tables, 1 <= s <= 8.
///
/// Elements are the integers [0, q) read as polynomials over GF(2) in the
/// generator alpha (bit b is the coefficient of alpha^b). The primitive
/// polynomial includes its leading term, e.g. x^2 + x + 1 is 0b111.
class FieldTable {
public:
    explicit FieldTable(unsigned bits, std::optional<std::uint32_t> primitive_polynomial = std::nullopt);

    /// x+1, x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1, x^6+x+1, x^7+x^3+1, x^8+x^4+x^3+x^2+1.
    static std::uint32_t default_polynomial(unsigned bits);

    unsigned bits() const noexcept { return bits_; }
    std::size_t size() const noexcept { return std::size_t{1} << bits_; }
    std::uint32_t polynomial() const noexcept { return polynomial_; }

    Symbol add(Symbol a, Symbol b) const noexcept { return static_cast<Symbol>(a ^ b); }
    Symbol sub(Symbol a, Symbol b) const noexcept { return static_cast<Symbol>(a ^ b); }
    Symbol mul(Symbol a, Symbol b) const noexcept {
        if (a == 0 || b == 0)
            return 0;
        return antilog_[log_[a] + log_[b]];
    }
    /// Throws std::domain_error for a = 0.
    Symbol inv(Symbol a) const;
    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }
    /// alpha^k for any k >= 0.
    Symbol alpha_pow(std::size_t k) const noexcept { return antilog_[k % (size() - 1)]; }
    /// Discrete log base alpha; a must be nonzero.
    std::size_t log(Symbol a) const;

    bool operator==(const FieldTable& other) const noexcept {
        return bits_ == other.bits_ && polynomial_ == other.polynomial_;
    }

private:
    unsigned bits_;
    std::uint32_t polynomial_;
    std::vector<std::uint16_t> log_;
    // doubled so that mul needs no modular reduction
    std::vector<Symbol> antilog_;
};

/// Scalar multiple alpha * v.
SymbolVector scale(const FieldTable& field, Symbol alpha, const SymbolVector& v);

/// Dense matrix over GF(2^s), one symbol list per row.
struct SymbolMatrix {
    std::size_t cols = 0;
    std::vector<std::vector<Symbol>> rows;
};

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> gfq_row_reduce(const FieldTable& field, SymbolMatrix& m);
std::size_t gfq_rank(const FieldTable& field, SymbolMatrix m);
std::vector<SymbolVector> gfq_nullspace_basis(const FieldTable& field, SymbolMatrix h);
/// True iff H v = 0 over GF(2^s).
bool gfq_annihilates(const FieldTable& field, const SymbolMatrix& h, const SymbolVector& v);

} // namespace rfp
