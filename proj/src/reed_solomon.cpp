#include "rfp/reed_solomon.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rfp {

ReedSolomonCode::ReedSolomonCode(FieldTable field, std::size_t dimension)
    : field_(std::move(field)), dimension_(dimension) {
    if (field_.size() < 3)
        throw std::invalid_argument("Reed-Solomon code needs q >= 4");
    if (dimension_ > length())
        throw std::invalid_argument("RS dimension " + std::to_string(dimension_) + " exceeds length " +
                                    std::to_string(length()));
}

SymbolVector ReedSolomonCode::encode(std::span<const Symbol> message) const {
    if (message.size() != dimension_)
        throw std::invalid_argument("RS message has " + std::to_string(message.size()) + " symbols, expected " +
                                    std::to_string(dimension_));
    const std::size_t n = length();
    SymbolVector word(n, field_.bits());
    for (std::size_t j = 0; j < n; ++j) {
        // Horner at x = alpha^j
        const Symbol x = field_.alpha_pow(j);
        Symbol acc = 0;
        for (std::size_t i = dimension_; i-- > 0;) {
            if (message[i] >= field_.size())
                throw std::invalid_argument("RS message symbol out of range");
            acc = field_.add(field_.mul(acc, x), message[i]);
        }
        word.set(j, acc);
    }
    return word;
}

std::vector<Symbol> ReedSolomonCode::syndrome(const SymbolVector& word) const {
    const std::size_t n = length();
    if (word.size() != n)
        throw std::invalid_argument("RS word has length " + std::to_string(word.size()) + ", expected " +
                                    std::to_string(n));
    if (word.bits_per_symbol() != field_.bits())
        throw std::invalid_argument("RS word alphabet does not match the field");
    std::vector<Symbol> s(n - dimension_, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const Symbol c = word.get(j);
        if (c == 0)
            continue;
        for (std::size_t l = 1; l <= n - dimension_; ++l)
            s[l - 1] = field_.add(s[l - 1], field_.mul(c, field_.alpha_pow(j * l)));
    }
    return s;
}

bool ReedSolomonCode::is_codeword(const SymbolVector& word) const {
    const auto s = syndrome(word);
    return std::all_of(s.begin(), s.end(), [](Symbol v) { return v == 0; });
}

std::vector<Symbol> ReedSolomonCode::message_of(const SymbolVector& codeword) const {
    const std::size_t n = length();
    if (codeword.size() != n)
        throw std::invalid_argument("RS word has length " + std::to_string(codeword.size()) + ", expected " +
                                    std::to_string(n));
    std::vector<Symbol> msg(dimension_, 0);
    for (std::size_t i = 0; i < dimension_; ++i) {
        Symbol acc = 0;
        for (std::size_t j = 0; j < n; ++j)
            acc = field_.add(acc, field_.mul(codeword.get(j), field_.alpha_pow((n - (i * j) % n) % n)));
        msg[i] = acc;
    }
    return msg;
}

SymbolVector ReedSolomonCode::interpolate(std::span<const std::size_t> positions,
                                          std::span<const Symbol> values) const {
    const std::size_t n = length();
    if (positions.size() != dimension_ || values.size() != dimension_)
        throw std::invalid_argument("RS interpolation needs exactly K = " + std::to_string(dimension_) + " points");
    std::vector<Symbol> x(dimension_);
    for (std::size_t j = 0; j < dimension_; ++j) {
        if (positions[j] >= n)
            throw std::invalid_argument("RS interpolation position out of range");
        x[j] = field_.alpha_pow(positions[j]);
        for (std::size_t k = 0; k < j; ++k)
            if (positions[k] == positions[j])
                throw std::invalid_argument("RS interpolation positions must be distinct");
    }
    // w_j = v_j / prod_{k != j} (x_j - x_k)
    std::vector<Symbol> w(dimension_);
    for (std::size_t j = 0; j < dimension_; ++j) {
        Symbol den = 1;
        for (std::size_t k = 0; k < dimension_; ++k)
            if (k != j)
                den = field_.mul(den, field_.sub(x[j], x[k]));
        w[j] = field_.div(values[j], den);
    }
    SymbolVector word(n, field_.bits());
    for (std::size_t l = 0; l < n; ++l) {
        const Symbol xl = field_.alpha_pow(l);
        Symbol acc = 0;
        for (std::size_t j = 0; j < dimension_; ++j) {
            Symbol term = w[j];
            for (std::size_t k = 0; k < dimension_ && term != 0; ++k)
                if (k != j)
                    term = field_.mul(term, field_.sub(xl, x[k]));
            acc = field_.add(acc, term);
        }
        word.set(l, acc);
    }
    return word;
}

bool rs_syndrome_check(const FieldTable& field, std::size_t n_out, std::size_t k_out, const SymbolVector& word) {
    if (n_out != field.size() - 1)
        throw std::invalid_argument("RS length must be q-1");
    if (word.size() != n_out)
        throw std::invalid_argument("RS word has length " + std::to_string(word.size()) + ", expected " +
                                    std::to_string(n_out));
    return ReedSolomonCode(field, k_out).is_codeword(word);
}

} // namespace rfp
