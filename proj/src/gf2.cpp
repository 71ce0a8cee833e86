#include "rfp/gf2.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rfp {

namespace {

// rows[dst] ^= rows[src], starting at word `from` (both rows are zero before it).
void xor_rows_from(BitVector& dst, const BitVector& src, std::size_t from) {
    auto d = dst.words();
    auto s = src.words();
    for (std::size_t w = from; w < d.size(); ++w)
        d[w] ^= s[w];
}

std::string bits_to_hex(const BitVector& row) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < row.size(); i += 4) {
        int nibble = 0;
        for (std::size_t b = 0; b < 4; ++b)
            if (i + b < row.size() && row.get(i + b))
                nibble |= 8 >> b;
        out.push_back(kDigits[nibble]);
    }
    return out;
}

} // namespace

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows, std::size_t cols) {
    for (const BitVector& r : rows)
        if (r.size() != cols)
            throw std::invalid_argument("BitMatrix row width mismatch");
    BitMatrix m;
    m.cols_ = cols;
    m.rows_ = std::move(rows);
    return m;
}

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
    std::vector<BitVector> parsed;
    std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
    for (std::string_view r : rows)
        parsed.push_back(BitVector::from_string(r));
    return from_rows(std::move(parsed), cols);
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i);
    return m;
}

BitVector BitMatrix::multiply(const BitVector& v) const {
    if (v.size() != cols_)
        throw std::invalid_argument("BitMatrix::multiply: vector length " + std::to_string(v.size()) +
                                    " != " + std::to_string(cols_) + " columns");
    BitVector out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        if (rows_[r].dot(v))
            out.set(r);
    return out;
}

bool BitMatrix::annihilates(const BitVector& v) const {
    if (v.size() != cols_)
        throw std::invalid_argument("BitMatrix::annihilates: vector length " + std::to_string(v.size()) +
                                    " != " + std::to_string(cols_) + " columns");
    for (const BitVector& r : rows_)
        if (r.dot(v))
            return false;
    return true;
}

std::string BitMatrix::to_hex_rows() const {
    std::string out;
    for (const BitVector& r : rows_) {
        out += bits_to_hex(r);
        out.push_back('\n');
    }
    return out;
}

BitMatrix BitMatrix::from_hex_rows(std::string_view text, std::size_t cols) {
    std::vector<BitVector> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line.size() != (cols + 3) / 4)
            throw std::invalid_argument("hex row width does not match column count");
        BitVector row(cols);
        for (std::size_t i = 0; i < cols; ++i) {
            const char c = line[i / 4];
            int nibble;
            if (c >= '0' && c <= '9')
                nibble = c - '0';
            else if (c >= 'a' && c <= 'f')
                nibble = c - 'a' + 10;
            else
                throw std::invalid_argument("invalid hex digit in matrix row");
            row.set(i, ((nibble >> (3 - i % 4)) & 1) != 0);
        }
        rows.push_back(std::move(row));
    }
    return from_rows(std::move(rows), cols);
}

std::vector<std::size_t> gf2_row_reduce(std::vector<BitVector>& rows, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && !rows[p].get(c))
            ++p;
        if (p == rows.size())
            continue;
        std::swap(rows[r], rows[p]);
        const std::size_t from = c / BitVector::kWordBits;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i].get(c))
                xor_rows_from(rows[i], rows[r], from);
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t gf2_rank(const BitMatrix& m) {
    std::vector<BitVector> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        rows.push_back(m.row(r));
    return gf2_row_reduce(rows, m.cols()).size();
}

std::vector<BitVector> gf2_nullspace_basis(const BitMatrix& h) {
    std::vector<BitVector> rows;
    rows.reserve(h.rows());
    for (std::size_t r = 0; r < h.rows(); ++r)
        rows.push_back(h.row(r));
    const auto pivots = gf2_row_reduce(rows, h.cols());

    std::vector<bool> is_pivot(h.cols(), false);
    for (std::size_t p : pivots)
        is_pivot[p] = true;

    std::vector<BitVector> basis;
    basis.reserve(h.cols() - pivots.size());
    for (std::size_t f = 0; f < h.cols(); ++f) {
        if (is_pivot[f])
            continue;
        BitVector v(h.cols());
        v.set(f);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (rows[i].get(f))
                v.set(pivots[i]);
        basis.push_back(std::move(v));
    }
    return basis;
}

BitConstraints BitConstraints::from_map(std::size_t n, const std::map<std::size_t, bool>& fixed) {
    BitConstraints c = none(n);
    for (auto [coord, bit] : fixed) {
        if (coord >= n)
            throw std::out_of_range("fixed coordinate " + std::to_string(coord) + " out of range");
        c.mask.set(coord);
        c.values.set(coord, bit);
    }
    return c;
}

std::uint64_t ConstrainedSolution::count() const {
    if (!consistent)
        return 0;
    if (directions.size() >= 64)
        throw std::overflow_error("solution count 2^" + std::to_string(directions.size()) + " exceeds 64 bits");
    return std::uint64_t{1} << directions.size();
}

BitVector ConstrainedSolution::member(std::uint64_t index) const {
    BitVector y = particular;
    for (std::size_t j = 0; j < directions.size() && j < 64; ++j)
        if ((index >> j) & 1U)
            y ^= directions[j];
    return y;
}

ConstrainedSolution gf2_solve_constrained(const BitMatrix& h, const BitConstraints& fixed,
                                          std::span<const BitVector> exclude) {
    const std::size_t n = h.cols();
    if (fixed.mask.size() != n || fixed.values.size() != n)
        throw std::invalid_argument("constraint width does not match parity-check columns");

    std::vector<std::size_t> free_coords;
    for (std::size_t i = 0; i < n; ++i)
        if (!fixed.mask.get(i))
            free_coords.push_back(i);
    const std::size_t nf = free_coords.size();
    const BitVector pinned = fixed.mask & fixed.values;

    // Augmented system over the free coordinates; column nf carries the
    // contribution of the pinned ones.
    std::vector<BitVector> rows;
    rows.reserve(h.rows());
    for (std::size_t r = 0; r < h.rows(); ++r) {
        BitVector aug(nf + 1);
        const BitVector& hr = h.row(r);
        for (std::size_t j = 0; j < nf; ++j)
            if (hr.get(free_coords[j]))
                aug.set(j);
        if (hr.dot(pinned))
            aug.set(nf);
        rows.push_back(std::move(aug));
    }
    const auto pivots = gf2_row_reduce(rows, nf + 1);

    ConstrainedSolution sol;
    if (!pivots.empty() && pivots.back() == nf)
        return sol;
    sol.consistent = true;

    sol.particular = pinned;
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (rows[i].get(nf))
            sol.particular.set(free_coords[pivots[i]]);

    std::vector<bool> is_pivot(nf, false);
    for (std::size_t p : pivots)
        is_pivot[p] = true;
    for (std::size_t f = 0; f < nf; ++f) {
        if (is_pivot[f])
            continue;
        BitVector d(n);
        d.set(free_coords[f]);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (rows[i].get(f))
                d.set(free_coords[pivots[i]]);
        sol.directions.push_back(std::move(d));
    }

    // Any |exclude| + 1 distinct members contain one outside the exclusion list.
    const std::size_t dims = sol.directions.size();
    const std::uint64_t limit = dims >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dims);
    for (std::uint64_t idx = 0; idx < limit && idx <= exclude.size(); ++idx) {
        BitVector y = sol.member(idx);
        if (std::find(exclude.begin(), exclude.end(), y) == exclude.end()) {
            sol.witness = std::move(y);
            break;
        }
    }
    return sol;
}

} // namespace rfp
