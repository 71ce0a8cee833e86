#pragma once

#include "rfp/bit_vector.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rfp {

using Symbol = std::uint8_t;

/// A length-n word over GF(2^s), s in [1, 8], stored as s packed bit planes:
/// bit b of the symbol at coordinate i is plane(b).get(i). The binary case is
/// a single packed plane.
class SymbolVector {
public:
    SymbolVector() = default;
    explicit SymbolVector(std::size_t length, unsigned bits_per_symbol = 1);

    static SymbolVector binary(BitVector bits);
    static SymbolVector from_symbols(std::span<const Symbol> symbols, unsigned bits_per_symbol);
    /// One character per coordinate, hex digit per symbol ("0110", "0123").
    /// Only for alphabets with q <= 16.
    static SymbolVector from_digits(std::string_view digits, unsigned bits_per_symbol = 1);

    std::size_t size() const noexcept { return length_; }
    unsigned bits_per_symbol() const noexcept { return static_cast<unsigned>(planes_.size()); }
    std::size_t alphabet_size() const noexcept { return std::size_t{1} << planes_.size(); }
    bool is_binary() const noexcept { return planes_.size() == 1; }

    Symbol get(std::size_t i) const noexcept {
        Symbol s = 0;
        for (std::size_t b = 0; b < planes_.size(); ++b)
            s |= static_cast<Symbol>(planes_[b].get(i) << b);
        return s;
    }
    void set(std::size_t i, Symbol s) noexcept {
        for (std::size_t b = 0; b < planes_.size(); ++b)
            planes_[b].set(i, ((s >> b) & 1U) != 0);
    }

    const BitVector& plane(unsigned b) const noexcept { return planes_[b]; }
    BitVector& plane(unsigned b) noexcept { return planes_[b]; }
    /// The packed bits of a binary vector. Throws for q > 2.
    const BitVector& bits() const;

    std::vector<Symbol> symbols() const;
    /// Coordinates with a nonzero symbol.
    BitVector support() const;
    std::size_t weight() const { return support().popcount(); }
    bool is_zero() const noexcept;

    /// Coordinate-wise addition in GF(2^s), which is XOR of the planes.
    SymbolVector& operator+=(const SymbolVector& other);
    friend SymbolVector operator+(SymbolVector a, const SymbolVector& b) { return a += b; }

    bool operator==(const SymbolVector& other) const noexcept = default;
    /// Lexicographic by coordinate, coordinate 0 most significant.
    std::strong_ordering operator<=>(const SymbolVector& other) const noexcept;

    std::string to_string() const;
    std::size_t hash() const noexcept;

private:
    std::size_t length_ = 0;
    std::vector<BitVector> planes_;
};

struct SymbolVectorHash {
    std::size_t operator()(const SymbolVector& v) const noexcept { return v.hash(); }
};

/// Hex text form: each symbol contributes bits_per_symbol bits, most
/// significant first, coordinate 0 first; the bit string is zero-padded to a
/// multiple of four and written as lowercase hex.
std::string to_hex(const SymbolVector& v);
SymbolVector from_hex(std::string_view hex, std::size_t length, unsigned bits_per_symbol);

/// Throws std::invalid_argument unless all vectors share length and alphabet.
void require_same_shape(std::span<const SymbolVector> vectors, std::string_view what);

} // namespace rfp
