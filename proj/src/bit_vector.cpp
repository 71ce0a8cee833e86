#include "rfp/bit_vector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace rfp {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + BitVector::kWordBits - 1) / BitVector::kWordBits; }

} // namespace

BitVector::BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i);
        else if (bits[i] != '0')
            throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
    return v;
}

void BitVector::reset() noexcept { std::fill(words_.begin(), words_.end(), Word{0}); }

std::size_t BitVector::popcount() const noexcept {
    std::size_t count = 0;
    for (Word w : words_)
        count += static_cast<std::size_t>(std::popcount(w));
    return count;
}

bool BitVector::none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

std::size_t BitVector::find_next(std::size_t from) const noexcept {
    if (from >= size_)
        return npos;
    std::size_t wi = from / kWordBits;
    Word w = words_[wi] & (~Word{0} << (from % kWordBits));
    while (true) {
        if (w != 0)
            return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
        if (++wi == words_.size())
            return npos;
        w = words_[wi];
    }
}

bool BitVector::dot(const BitVector& other) const noexcept {
    Word acc = 0;
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i)
        acc ^= words_[i] & other.words_[i];
    return (std::popcount(acc) & 1) != 0;
}

bool BitVector::is_subset_of(const BitVector& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if ((words_[i] & ~other.words_[i]) != 0)
            return false;
    return true;
}

BitVector BitVector::slice(std::size_t start, std::size_t length) const {
    if (start + length > size_)
        throw std::out_of_range("BitVector::slice past end");
    BitVector out(length);
    const std::size_t shift = start % kWordBits;
    const std::size_t base = start / kWordBits;
    for (std::size_t i = 0; i < out.words_.size(); ++i) {
        Word lo = words_[base + i] >> shift;
        if (shift != 0 && base + i + 1 < words_.size())
            lo |= words_[base + i + 1] << (kWordBits - shift);
        out.words_[i] = lo;
    }
    out.clear_tail();
    return out;
}

bool BitVector::equals_range(std::size_t start, const BitVector& other) const noexcept {
    if (start + other.size_ > size_)
        return false;
    const std::size_t shift = start % kWordBits;
    const std::size_t base = start / kWordBits;
    const std::size_t full = other.size_ / kWordBits;
    const std::size_t rest = other.size_ % kWordBits;
    auto window = [&](std::size_t i) {
        Word lo = words_[base + i] >> shift;
        if (shift != 0 && base + i + 1 < words_.size())
            lo |= words_[base + i + 1] << (kWordBits - shift);
        return lo;
    };
    for (std::size_t i = 0; i < full; ++i)
        if (window(i) != other.words_[i])
            return false;
    if (rest != 0) {
        const Word mask = (Word{1} << rest) - 1;
        if ((window(full) & mask) != other.words_[full])
            return false;
    }
    return true;
}

void BitVector::assign_range(std::size_t start, const BitVector& src) noexcept {
    // Word-at-a-time would be faster; callers only use this for encoding.
    for (std::size_t i = 0; i < src.size_; ++i)
        set(start + i, src.get(i));
}

BitVector& BitVector::operator^=(const BitVector& other) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] ^= other.words_[i];
    return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= other.words_[i];
    return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] |= other.words_[i];
    return *this;
}

BitVector BitVector::operator~() const {
    BitVector out(*this);
    for (Word& w : out.words_)
        w = ~w;
    out.clear_tail();
    return out;
}

std::strong_ordering BitVector::operator<=>(const BitVector& other) const noexcept {
    if (size_ != other.size_)
        return size_ <=> other.size_;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        const Word diff = words_[i] ^ other.words_[i];
        if (diff != 0) {
            const Word low = diff & (~diff + 1);
            return (words_[i] & low) != 0 ? std::strong_ordering::greater : std::strong_ordering::less;
        }
    }
    return std::strong_ordering::equal;
}

void BitVector::clear_tail() noexcept {
    const std::size_t rest = size_ % kWordBits;
    if (rest != 0 && !words_.empty())
        words_.back() &= (Word{1} << rest) - 1;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i))
            s[i] = '1';
    return s;
}

std::size_t BitVector::hash() const noexcept {
    // splitmix-style mixing per word
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
    for (Word w : words_) {
        std::uint64_t z = w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        h ^= z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
}

} // namespace rfp
