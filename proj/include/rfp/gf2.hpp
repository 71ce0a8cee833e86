#pragma once

#include "rfp/bit_vector.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rfp {

/// Dense row-major matrix over GF(2); each row is a packed BitVector.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix from_rows(std::vector<BitVector> rows, std::size_t cols);
    static BitMatrix from_strings(std::initializer_list<std::string_view> rows);
    static BitMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }

    bool get(std::size_t r, std::size_t c) const noexcept { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) noexcept { rows_[r].set(c, v); }
    const BitVector& row(std::size_t r) const noexcept { return rows_[r]; }
    BitVector& row(std::size_t r) noexcept { return rows_[r]; }

    /// H * v (the syndrome when H is a parity-check matrix).
    BitVector multiply(const BitVector& v) const;
    /// True iff H * v = 0, without materializing the syndrome.
    bool annihilates(const BitVector& v) const;

    /// One row per line, hex digits, coordinate 0 in the most significant bit.
    std::string to_hex_rows() const;
    static BitMatrix from_hex_rows(std::string_view text, std::size_t cols);

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

/// Row-reduces `rows` (each of width `cols`) in place to reduced echelon form.
/// Nonzero rows come first, in pivot order; returns the pivot columns.
std::vector<std::size_t> gf2_row_reduce(std::vector<BitVector>& rows, std::size_t cols);

std::size_t gf2_rank(const BitMatrix& m);

/// Basis of {v : H v = 0}; exactly cols - rank vectors.
std::vector<BitVector> gf2_nullspace_basis(const BitMatrix& h);

/// Fixed coordinates for constrained solving: `values` is read only where
/// `mask` is set.
struct BitConstraints {
    BitVector mask;
    BitVector values;

    static BitConstraints none(std::size_t n) { return {BitVector(n), BitVector(n)}; }
    static BitConstraints from_map(std::size_t n, const std::map<std::size_t, bool>& fixed);
};

/// The affine set {y : H y = 0, y agrees with the constraints}, described as
/// particular + span(directions).
struct ConstrainedSolution {
    bool consistent = false;
    BitVector particular;
    std::vector<BitVector> directions;
    /// A member of the set outside the exclusion list, when one exists.
    std::optional<BitVector> witness;

    std::size_t free_dimensions() const noexcept { return consistent ? directions.size() : 0; }
    /// Exact number of solutions. Throws std::overflow_error past 2^63.
    std::uint64_t count() const;
    /// The solution with direction coefficients given by the bits of `index`.
    BitVector member(std::uint64_t index) const;
};

ConstrainedSolution gf2_solve_constrained(const BitMatrix& h, const BitConstraints& fixed,
                                          std::span<const BitVector> exclude = {});

} // namespace rfp
