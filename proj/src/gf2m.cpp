#include "rfp/gf2m.hpp"

#include <stdexcept>
#include <string>

namespace rfp {

std::uint32_t FieldTable::default_polynomial(unsigned bits) {
    switch (bits) {
    case 1: return 0x3;
    case 2: return 0x7;
    case 3: return 0xB;
    case 4: return 0x13;
    case 5: return 0x25;
    case 6: return 0x43;
    case 7: return 0x89;
    case 8: return 0x11D;
    default: throw std::invalid_argument("field bits must be in [1, 8], got " + std::to_string(bits));
    }
}

FieldTable::FieldTable(unsigned bits, std::optional<std::uint32_t> primitive_polynomial)
    : bits_(bits), polynomial_(primitive_polynomial.value_or(default_polynomial(bits))) {
    const std::size_t q = size();
    if ((polynomial_ >> bits_) != 1U)
        throw std::invalid_argument("primitive polynomial must have degree " + std::to_string(bits_));

    const std::size_t order = q - 1;
    log_.assign(q, 0);
    antilog_.assign(2 * order, 0);
    std::vector<bool> seen(q, false);
    std::uint32_t x = 1;
    for (std::size_t k = 0; k < order; ++k) {
        if (x == 0 || seen[x])
            throw std::invalid_argument("polynomial is not primitive over GF(2)");
        seen[x] = true;
        antilog_[k] = antilog_[k + order] = static_cast<Symbol>(x);
        log_[x] = static_cast<std::uint16_t>(k);
        x <<= 1;
        if (x & q)
            x ^= polynomial_;
    }
    if (x != 1)
        throw std::invalid_argument("polynomial is not primitive over GF(2)");
}

Symbol FieldTable::inv(Symbol a) const {
    if (a == 0)
        throw std::domain_error("inverse of zero in GF(" + std::to_string(size()) + ")");
    const std::size_t order = size() - 1;
    return antilog_[(order - log_[a]) % order];
}

std::size_t FieldTable::log(Symbol a) const {
    if (a == 0)
        throw std::domain_error("logarithm of zero");
    return log_[a];
}

SymbolVector scale(const FieldTable& field, Symbol alpha, const SymbolVector& v) {
    SymbolVector out(v.size(), v.bits_per_symbol());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.set(i, field.mul(alpha, v.get(i)));
    return out;
}

std::vector<std::size_t> gfq_row_reduce(const FieldTable& field, SymbolMatrix& m) {
    std::vector<std::size_t> pivots;
    auto& rows = m.rows;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0)
            ++p;
        if (p == rows.size())
            continue;
        std::swap(rows[r], rows[p]);
        const Symbol scale_by = field.inv(rows[r][c]);
        for (Symbol& s : rows[r])
            s = field.mul(s, scale_by);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Symbol factor = rows[i][c];
            if (i == r || factor == 0)
                continue;
            for (std::size_t j = c; j < m.cols; ++j)
                rows[i][j] = field.sub(rows[i][j], field.mul(factor, rows[r][j]));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t gfq_rank(const FieldTable& field, SymbolMatrix m) { return gfq_row_reduce(field, m).size(); }

std::vector<SymbolVector> gfq_nullspace_basis(const FieldTable& field, SymbolMatrix h) {
    const auto pivots = gfq_row_reduce(field, h);
    std::vector<bool> is_pivot(h.cols, false);
    for (std::size_t p : pivots)
        is_pivot[p] = true;
    std::vector<SymbolVector> basis;
    for (std::size_t f = 0; f < h.cols; ++f) {
        if (is_pivot[f])
            continue;
        SymbolVector v(h.cols, field.bits());
        v.set(f, 1);
        // x_p = -sum_f a_{i,f} x_f, and negation is the identity in characteristic 2
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v.set(pivots[i], h.rows[i][f]);
        basis.push_back(std::move(v));
    }
    return basis;
}

bool gfq_annihilates(const FieldTable& field, const SymbolMatrix& h, const SymbolVector& v) {
    if (v.size() != h.cols)
        throw std::invalid_argument("vector length does not match parity-check columns");
    for (const auto& row : h.rows) {
        Symbol acc = 0;
        for (std::size_t j = 0; j < h.cols; ++j)
            acc = field.add(acc, field.mul(row[j], v.get(j)));
        if (acc != 0)
            return false;
    }
    return true;
}

} // namespace rfp
