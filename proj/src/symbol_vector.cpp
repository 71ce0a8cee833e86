#include "rfp/symbol_vector.hpp"

#include <stdexcept>

namespace rfp {

namespace {

void check_bits(unsigned bits_per_symbol) {
    if (bits_per_symbol < 1 || bits_per_symbol > 8)
        throw std::invalid_argument("bits per symbol must be in [1, 8]");
}

int hex_value(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

SymbolVector::SymbolVector(std::size_t length, unsigned bits_per_symbol) : length_(length) {
    check_bits(bits_per_symbol);
    planes_.assign(bits_per_symbol, BitVector(length));
}

SymbolVector SymbolVector::binary(BitVector bits) {
    SymbolVector v;
    v.length_ = bits.size();
    v.planes_.push_back(std::move(bits));
    return v;
}

SymbolVector SymbolVector::from_symbols(std::span<const Symbol> symbols, unsigned bits_per_symbol) {
    SymbolVector v(symbols.size(), bits_per_symbol);
    const std::size_t q = v.alphabet_size();
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] >= q)
            throw std::invalid_argument("symbol out of range for alphabet");
        v.set(i, symbols[i]);
    }
    return v;
}

SymbolVector SymbolVector::from_digits(std::string_view digits, unsigned bits_per_symbol) {
    std::vector<Symbol> symbols;
    symbols.reserve(digits.size());
    for (char c : digits) {
        const int value = hex_value(c);
        if (value < 0)
            throw std::invalid_argument("digit string contains a non-hex character");
        symbols.push_back(static_cast<Symbol>(value));
    }
    return from_symbols(symbols, bits_per_symbol);
}

const BitVector& SymbolVector::bits() const {
    if (planes_.size() != 1)
        throw std::logic_error("bits() requires a binary vector");
    return planes_.front();
}

std::vector<Symbol> SymbolVector::symbols() const {
    std::vector<Symbol> out(length_);
    for (std::size_t i = 0; i < length_; ++i)
        out[i] = get(i);
    return out;
}

BitVector SymbolVector::support() const {
    BitVector s(length_);
    for (const BitVector& p : planes_)
        s |= p;
    return s;
}

bool SymbolVector::is_zero() const noexcept {
    for (const BitVector& p : planes_)
        if (p.any())
            return false;
    return true;
}

SymbolVector& SymbolVector::operator+=(const SymbolVector& other) {
    if (other.length_ != length_ || other.planes_.size() != planes_.size())
        throw std::invalid_argument("vector shapes differ");
    for (std::size_t b = 0; b < planes_.size(); ++b)
        planes_[b] ^= other.planes_[b];
    return *this;
}

std::strong_ordering SymbolVector::operator<=>(const SymbolVector& other) const noexcept {
    if (length_ != other.length_)
        return length_ <=> other.length_;
    if (planes_.size() != other.planes_.size())
        return planes_.size() <=> other.planes_.size();
    if (planes_.size() == 1)
        return planes_[0] <=> other.planes_[0];
    BitVector diff(length_);
    for (std::size_t b = 0; b < planes_.size(); ++b)
        diff |= planes_[b] ^ other.planes_[b];
    const std::size_t i = diff.find_first();
    if (i == BitVector::npos)
        return std::strong_ordering::equal;
    return get(i) <=> other.get(i);
}

std::string SymbolVector::to_string() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(length_);
    for (std::size_t i = 0; i < length_; ++i) {
        const Symbol v = get(i);
        if (v < 16)
            s.push_back(kDigits[v]);
        else
            s += "(" + std::to_string(v) + ")";
    }
    return s;
}

std::size_t SymbolVector::hash() const noexcept {
    std::size_t h = length_;
    for (const BitVector& p : planes_)
        h = h * 0x100000001b3ULL ^ p.hash();
    return h;
}

std::string to_hex(const SymbolVector& v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    const unsigned s = v.bits_per_symbol();
    const std::size_t total = v.size() * s;
    std::string out((total + 3) / 4, '0');
    std::size_t pos = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Symbol sym = v.get(i);
        for (unsigned b = s; b-- > 0; ++pos) {
            if ((sym >> b) & 1U)
                out[pos / 4] = static_cast<char>(out[pos / 4] | (8 >> (pos % 4)));
        }
    }
    // characters were built from '0' (0x30) by OR-ing nibble bits
    for (char& c : out)
        c = kDigits[c - '0'];
    return out;
}

SymbolVector from_hex(std::string_view hex, std::size_t length, unsigned bits_per_symbol) {
    SymbolVector v(length, bits_per_symbol);
    const std::size_t total = length * bits_per_symbol;
    if (hex.size() != (total + 3) / 4)
        throw std::invalid_argument("hex fingerprint has " + std::to_string(hex.size()) + " digits, expected " +
                                    std::to_string((total + 3) / 4));
    auto bit_at = [&](std::size_t pos) {
        const int nibble = hex_value(hex[pos / 4]);
        if (nibble < 0)
            throw std::invalid_argument("hex fingerprint contains a non-hex character");
        return ((nibble >> (3 - pos % 4)) & 1) != 0;
    };
    std::size_t pos = 0;
    for (std::size_t i = 0; i < length; ++i) {
        Symbol sym = 0;
        for (unsigned b = bits_per_symbol; b-- > 0; ++pos)
            if (bit_at(pos))
                sym = static_cast<Symbol>(sym | (1U << b));
        v.set(i, sym);
    }
    for (; pos < hex.size() * 4; ++pos)
        if (bit_at(pos))
            throw std::invalid_argument("hex fingerprint has nonzero padding bits");
    return v;
}

void require_same_shape(std::span<const SymbolVector> vectors, std::string_view what) {
    for (const SymbolVector& v : vectors) {
        if (v.size() != vectors.front().size())
            throw std::invalid_argument(std::string(what) + ": fingerprint lengths differ");
        if (v.bits_per_symbol() != vectors.front().bits_per_symbol())
            throw std::invalid_argument(std::string(what) + ": fingerprint alphabets differ");
    }
}

} // namespace rfp
