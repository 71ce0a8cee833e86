#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rfp {

/// Packed binary vector. Coordinate i lives in bit (i % 64) of word (i / 64);
/// bits past size() are always zero.
class BitVector {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    BitVector() = default;
    explicit BitVector(std::size_t size);

    /// Parses a string of '0'/'1' characters, coordinate 0 first.
    static BitVector from_string(std::string_view bits);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    std::size_t word_count() const noexcept { return words_.size(); }

    bool get(std::size_t i) const noexcept {
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
    }
    void set(std::size_t i, bool value = true) noexcept {
        const Word mask = Word{1} << (i % kWordBits);
        if (value)
            words_[i / kWordBits] |= mask;
        else
            words_[i / kWordBits] &= ~mask;
    }
    void flip(std::size_t i) noexcept { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

    void reset() noexcept;
    std::size_t popcount() const noexcept;
    bool none() const noexcept;
    bool any() const noexcept { return !none(); }

    /// First set coordinate at or after `from`, or npos.
    std::size_t find_next(std::size_t from) const noexcept;
    std::size_t find_first() const noexcept { return find_next(0); }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    bool dot(const BitVector& other) const noexcept;
    bool is_subset_of(const BitVector& other) const noexcept;

    /// Copy of coordinates [start, start + length).
    BitVector slice(std::size_t start, std::size_t length) const;
    /// True iff coordinates [start, start + other.size()) equal `other`.
    bool equals_range(std::size_t start, const BitVector& other) const noexcept;
    void assign_range(std::size_t start, const BitVector& src) noexcept;

    BitVector& operator^=(const BitVector& other) noexcept;
    BitVector& operator&=(const BitVector& other) noexcept;
    BitVector& operator|=(const BitVector& other) noexcept;
    BitVector operator~() const;

    friend BitVector operator^(BitVector a, const BitVector& b) noexcept { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector& b) noexcept { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector& b) noexcept { return a |= b; }

    bool operator==(const BitVector& other) const noexcept = default;
    /// Lexicographic by coordinate, coordinate 0 most significant.
    std::strong_ordering operator<=>(const BitVector& other) const noexcept;

    std::span<const Word> words() const noexcept { return words_; }
    std::span<Word> words() noexcept { return words_; }
    void clear_tail() noexcept;

    std::string to_string() const;
    std::size_t hash() const noexcept;

private:
    std::size_t size_ = 0;
    std::vector<Word> words_;
};

struct BitVectorHash {
    std::size_t operator()(const BitVector& v) const noexcept { return v.hash(); }
};

} // namespace rfp
